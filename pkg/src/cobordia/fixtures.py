"Reproducible example complexes and point clouds."

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence

import numpy as np

from cobordia.complex import Cell, FilteredComplex, Label
from cobordia.geometry.alpha import PointCloud

CYLINDER_EDGES: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 2), (1, 2),
    (6, 7), (6, 8), (7, 8),
    (3, 4), (3, 5), (4, 5),
    (0, 3), (0, 4), (0, 5), (1, 4), (1, 5), (2, 5),
    (3, 6), (3, 7), (3, 8), (4, 7), (4, 8), (5, 8),
)  # fmt: skip

CYLINDER_TRIANGLES: tuple[tuple[int, int, int], ...] = (
    (0, 1, 4), (0, 2, 5), (0, 3, 4), (0, 3, 5), (1, 2, 5), (1, 4, 5),
    (3, 4, 7), (3, 5, 8), (3, 6, 7), (3, 6, 8), (4, 5, 8), (4, 7, 8),
)  # fmt: skip

TOP = frozenset({0, 1, 2})
BOTTOM = frozenset({6, 7, 8})


def simplicial_complex(
    simplices: Sequence[tuple[int, ...]],
    values: Sequence[float],
    top: frozenset[int] | set[int],
    bottom: frozenset[int] | set[int],
) -> FilteredComplex:
    """Build a labeled complex whose cell ids follow the order of ``simplices``.

    Faces must precede cofaces. A simplex is labeled A (B) when all its
    vertices are in ``top`` (``bottom``).
    """
    ids: dict[tuple[int, ...], int] = {}
    cells: list[Cell] = []
    for index, (simplex, value) in enumerate(zip(simplices, values, strict=True)):
        key = tuple(sorted(simplex))
        boundary = (
            tuple(ids[face] for face in itertools.combinations(key, len(key) - 1))
            if len(key) > 1
            else ()
        )
        if set(key) <= top:
            label = Label.A
        elif set(key) <= bottom:
            label = Label.B
        else:
            label = Label.INTERIOR
        ids[key] = index
        cells.append(Cell(index, len(key) - 1, boundary, float(value), label, key))
    return FilteredComplex(cells)


def _cylinder_simplices() -> list[tuple[int, ...]]:
    return [(v,) for v in range(9)] + list(CYLINDER_EDGES) + list(CYLINDER_TRIANGLES)


def cylinder() -> FilteredComplex:
    """Triangulated cylinder with the top ring in A and the bottom ring in B.

    Cells enter one per step in dimension-major order, so ``f`` equals the
    position.
    """
    simplices = _cylinder_simplices()
    return simplicial_complex(simplices, range(len(simplices)), TOP, BOTTOM)


def cylinder_with_top_triangle() -> FilteredComplex:
    """Cylinder whose top ring is capped by a triangle inside A, added last."""
    simplices = [*_cylinder_simplices(), (0, 1, 2)]
    return simplicial_complex(simplices, range(len(simplices)), TOP, BOTTOM)


def cylinder_with_middle_triangle() -> FilteredComplex:
    """Cylinder whose middle ring is filled by an interior triangle, added last."""
    simplices = [*_cylinder_simplices(), (3, 4, 5)]
    return simplicial_complex(simplices, range(len(simplices)), TOP, BOTTOM)


def two_tunnel() -> FilteredComplex:
    """Two A-B bridges at f=1 and f=2 merged through B at f=3."""
    simplices = [(0,), (1,), (2,), (3,), (0, 2), (1, 3), (2, 3)]
    return simplicial_complex(simplices, [0, 0, 0, 0, 1, 2, 3], {0, 1}, {2, 3})


def bridge() -> FilteredComplex:
    """One A vertex and one B vertex joined by an edge."""
    return simplicial_complex([(0,), (1,), (0, 1)], [0, 0, 1], {0}, {1})


def kernel_example(close_in_a: bool = False) -> FilteredComplex:
    """Two A vertices joined through one B vertex, optionally closed by an A edge."""
    simplices: list[tuple[int, ...]] = [(0,), (1,), (2,), (0, 2), (1, 2)]
    values = [0.0, 0.0, 0.0, 1.0, 2.0]
    if close_in_a:
        simplices.append((0, 1))
        values.append(3.0)
    return simplicial_complex(simplices, values, {0, 1}, {2})


def random_labeled_complex(seed: int, max_cells: int = 30) -> FilteredComplex:
    """Random simplicial complex of at most ``max_cells`` cells with tied integer f.

    A and B are vertex-induced, with some higher A/B simplices demoted to
    the interior so that the labels are not always maximal.
    """
    rng = np.random.default_rng(seed)
    n_vertices = int(rng.integers(4, 8))
    vertices = [int(v) for v in rng.permutation(n_vertices)]
    n_top = int(rng.integers(1, 3))
    n_bottom = int(rng.integers(1, 3))
    top = set(vertices[:n_top])
    bottom = set(vertices[n_top : n_top + n_bottom])

    simplices: list[tuple[int, ...]] = [(v,) for v in range(n_vertices)]
    values: dict[tuple[int, ...], float] = {
        (v,): float(rng.integers(0, 4)) for v in range(n_vertices)
    }
    present = set(simplices)
    for size in (2, 3, 4):
        probability = {2: 0.6, 3: 0.5, 4: 0.5}[size]
        for key in itertools.combinations(range(n_vertices), size):
            if len(simplices) >= max_cells:
                break
            faces = list(itertools.combinations(key, size - 1))
            if any(face not in present for face in faces):
                continue
            if rng.random() >= probability:
                continue
            simplices.append(key)
            present.add(key)
            values[key] = max(values[face] for face in faces) + float(rng.integers(0, 3))

    labels: dict[tuple[int, ...], Label] = {}
    for key in simplices:
        for marked, label in ((top, Label.A), (bottom, Label.B)):
            if not set(key) <= marked:
                continue
            faces_marked = all(
                labels.get(face) is label for face in itertools.combinations(key, len(key) - 1)
            )
            if len(key) == 1 or (faces_marked and rng.random() < 0.8):
                labels[key] = label
    index = {key: i for i, key in enumerate(simplices)}
    cells = [
        Cell(
            index[key],
            len(key) - 1,
            tuple(index[face] for face in itertools.combinations(key, len(key) - 1))
            if len(key) > 1
            else (),
            values[key],
            labels.get(key, Label.INTERIOR),
            key,
        )
        for key in simplices
    ]
    return FilteredComplex(cells)


def cylinder_lattice_cloud(
    seed: int = 0,
    rings: int = 10,
    per_ring: int = 6,
    radius: float = 0.15,
    jitter: float = 0.01,
) -> PointCloud:
    """Stacked, alternately rotated rings around a vertical channel at (0.5, 0.5)."""
    rng = np.random.default_rng(seed)
    spacing = 1.0 / rings
    points = []
    for i in range(rings):
        z = spacing * (i + 0.5)
        offset = math.pi / per_ring if i % 2 else 0.0
        for j in range(per_ring):
            angle = 2.0 * math.pi * j / per_ring + offset
            points.append((0.5 + radius * math.cos(angle), 0.5 + radius * math.sin(angle), z))
    coords = np.asarray(points) + rng.uniform(-jitter, jitter, size=(len(points), 3))
    return PointCloud(np.clip(coords, 0.0, 1.0))
