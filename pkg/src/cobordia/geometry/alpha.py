"Delaunay and alpha filtrations of small point clouds, with slab labeling."

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from cobordia.complex import (
    Cell,
    FilteredComplex,
    Label,
    require_valid,
)

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12
CHUNK_SIZE = 20_000

Simplex = tuple[int, ...]


class PointCloudError(ValueError):
    """Base error for point cloud input and geometry."""


class DegeneratePosition(PointCloudError):
    """Raised when the points are not in general position."""


class EmptySlice(PointCloudError):
    """Raised when a slab contains no points."""


@dataclass(frozen=True)
class PointCloud:
    """Points of ``[0, 1]^d`` for ``d`` in {2, 3}, one row per point."""

    points: NDArray[np.float64]

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] not in (2, 3):
            raise PointCloudError(f"Expected an (n, 2) or (n, 3) array, got {points.shape}.")
        if not np.all(np.isfinite(points)):
            raise PointCloudError("Coordinates must be finite.")
        if points.size and (points.min() < -TOLERANCE or points.max() > 1.0 + TOLERANCE):
            raise PointCloudError("Coordinates must lie in the unit box.")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True)
class SliceSpec:
    """Top slab ``x[axis] >= 1 - epsilon`` and bottom slab ``x[axis] <= epsilon``."""

    axis: int
    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon}.")
        if self.axis < 0:
            raise ValueError(f"axis must be non-negative, got {self.axis}.")

    def top(self, cloud: PointCloud) -> NDArray[np.bool_]:
        return self._coordinate(cloud) >= 1.0 - self.epsilon - TOLERANCE

    def bottom(self, cloud: PointCloud) -> NDArray[np.bool_]:
        return self._coordinate(cloud) <= self.epsilon + TOLERANCE

    def _coordinate(self, cloud: PointCloud) -> NDArray[np.float64]:
        if self.axis >= cloud.dimension:
            raise ValueError(f"axis {self.axis} outside a {cloud.dimension}-dimensional cloud.")
        return cloud.points[:, self.axis]


def circumsphere(points: NDArray[np.float64]) -> tuple[NDArray[np.float64], float]:
    """Smallest sphere through the rows of ``points``.

    Returns:
        Center and radius. A single point has radius zero.
    """
    origin = points[0]
    if len(points) == 1:
        return origin.copy(), 0.0
    edges = points[1:] - origin
    rhs = np.einsum("ij,ij->i", edges, edges)
    weights = np.linalg.solve(2.0 * edges @ edges.T, rhs)
    offset = edges.T @ weights
    return origin + offset, float(np.linalg.norm(offset))


def _check_duplicates(points: NDArray[np.float64]) -> None:
    diffs = points[:, None, :] - points[None, :, :]
    dist2 = np.einsum("ijk,ijk->ij", diffs, diffs)
    np.fill_diagonal(dist2, np.inf)
    if np.any(dist2 < TOLERANCE):
        i, j = (int(v) for v in np.argwhere(dist2 < TOLERANCE)[0])
        raise DegeneratePosition(f"Points {i} and {j} coincide.")


def _batched(candidates: Iterable[Simplex], size: int) -> Iterable[NDArray[np.int64]]:
    iterator = iter(candidates)
    while True:
        chunk = list(itertools.islice(iterator, size))
        if not chunk:
            return
        yield np.asarray(chunk, dtype=np.int64)


def delaunay(cloud: PointCloud) -> list[Simplex]:
    """Delaunay complex by brute force over all ``(d+1)``-subsets.

    Returns:
        Every Delaunay simplex and all of its faces as sorted vertex tuples,
        ordered by dimension then lexicographically.

    Raises:
        DegeneratePosition: If points coincide, lie on a common sphere with a
            Delaunay simplex, or span no full-dimensional simplex.
    """
    points = cloud.points
    d = cloud.dimension
    n = len(cloud)
    if n < d + 1:
        raise DegeneratePosition(f"{n} points cannot span a {d}-simplex.")
    _check_duplicates(points)

    top: list[Simplex] = []
    for chunk in _batched(itertools.combinations(range(n), d + 1), CHUNK_SIZE):
        corners = points[chunk]
        edges = corners[:, 1:, :] - corners[:, :1, :]
        flat = np.abs(np.linalg.det(edges)) <= TOLERANCE
        chunk, corners, edges = chunk[~flat], corners[~flat], edges[~flat]
        if not len(chunk):
            continue
        rhs = np.einsum("mij,mij->mi", edges, edges)
        offsets = np.linalg.solve(2.0 * edges, rhs[..., None])[..., 0]
        centers = corners[:, 0, :] + offsets
        radius2 = np.einsum("mi,mi->m", offsets, offsets)
        gaps = points[None, :, :] - centers[:, None, :]
        dist2 = np.einsum("mnk,mnk->mn", gaps, gaps)
        tol = TOLERANCE * np.maximum(1.0, radius2)[:, None]
        own = np.zeros_like(dist2, dtype=bool)
        own[np.arange(len(chunk))[:, None], chunk] = True
        inside = (dist2 < radius2[:, None] - tol) & ~own
        on_sphere = (np.abs(dist2 - radius2[:, None]) <= tol) & ~own
        empty = ~inside.any(axis=1)
        degenerate = empty & on_sphere.any(axis=1)
        if degenerate.any():
            simplex = tuple(int(v) for v in chunk[np.argmax(degenerate)])
            raise DegeneratePosition(
                f"Simplex {simplex} has further points on its circumsphere."
            )
        top.extend(tuple(int(v) for v in row) for row in chunk[empty])

    if not top:
        raise DegeneratePosition(f"No full-dimensional simplex among {n} points.")
    faces: set[Simplex] = {(v,) for v in range(n)}
    for simplex in top:
        for size in range(2, d + 2):
            faces.update(itertools.combinations(simplex, size))
    simplices = sorted(faces, key=lambda s: (len(s), s))
    logger.info(
        "Delaunay complex: %d points, %d top simplices, %d simplices in total.",
        n,
        len(top),
        len(simplices),
    )
    return simplices


def alpha_values(simplices: Sequence[Simplex], cloud: PointCloud) -> dict[Simplex, float]:
    """Alpha value (radius convention) of every simplex of a Delaunay complex.

    Top simplices take their circumradius. A lower simplex takes its own
    smallest circumradius when no other point lies strictly inside that
    sphere, and the minimum over its cofacets otherwise.
    """
    points = cloud.points
    cofacets: dict[Simplex, list[Simplex]] = {simplex: [] for simplex in simplices}
    for simplex in simplices:
        if len(simplex) > 1:
            for face in itertools.combinations(simplex, len(simplex) - 1):
                cofacets[face].append(simplex)
    values: dict[Simplex, float] = {}
    for simplex in sorted(simplices, key=len, reverse=True):
        if len(simplex) == 1:
            values[simplex] = 0.0
            continue
        center, radius = circumsphere(points[list(simplex)])
        above = [values[coface] for coface in cofacets[simplex]]
        if above:
            dist2 = np.einsum("ij,ij->i", points - center, points - center)
            dist2[list(simplex)] = np.inf
            gabriel = not np.any(dist2 < radius * radius - TOLERANCE * max(1.0, radius * radius))
            value = radius if gabriel else min(above)
            values[simplex] = min(value, min(above))
        else:
            values[simplex] = radius
    return values


def alpha_filtration(simplices: Sequence[Simplex], cloud: PointCloud) -> FilteredComplex:
    """Unlabeled alpha complex; cell ids follow the ``(f, dim, vertices)`` order."""
    values = alpha_values(simplices, cloud)
    ordered = sorted(simplices, key=lambda s: (values[s], len(s), s))
    index = {simplex: i for i, simplex in enumerate(ordered)}
    cells = [
        Cell(
            index[simplex],
            len(simplex) - 1,
            tuple(index[face] for face in itertools.combinations(simplex, len(simplex) - 1))
            if len(simplex) > 1
            else (),
            values[simplex],
            Label.INTERIOR,
            simplex,
        )
        for simplex in ordered
    ]
    logger.info(
        "Alpha filtration over %d cells, f in [0, %.6g].", len(cells), max(values.values())
    )
    return FilteredComplex(cells, list(range(len(cells))))


def label_slices(complex_: FilteredComplex, spec: SliceSpec, cloud: PointCloud) -> FilteredComplex:
    """Label simplices inside the top slab A and inside the bottom slab B.

    Raises:
        EmptySlice: If either slab holds no point.
    """
    top = spec.top(cloud)
    bottom = spec.bottom(cloud)
    if not top.any():
        raise EmptySlice(f"No point with coordinate {spec.axis} >= {1.0 - spec.epsilon:.6g}.")
    if not bottom.any():
        raise EmptySlice(f"No point with coordinate {spec.axis} <= {spec.epsilon:.6g}.")
    for name, mask in (("top", top), ("bottom", bottom)):
        if int(mask.sum()) < cloud.dimension + 1:
            logger.warning("The %s slab holds only %d point(s).", name, int(mask.sum()))
    labels: dict[int, Label] = {}
    for cell in complex_.cells:
        if cell.simplex is None:
            raise PointCloudError(f"Cell {cell.id} carries no vertex tuple.")
        vertices = list(cell.simplex)
        if top[vertices].all():
            labels[cell.id] = Label.A
        elif bottom[vertices].all():
            labels[cell.id] = Label.B
        else:
            labels[cell.id] = Label.INTERIOR
    return complex_.with_labels(labels)


def strip_slab_interiors(complex_: FilteredComplex, dim: int = 2) -> FilteredComplex:
    """Remove ``dim``-cells lying inside A or inside B, with all their cofaces.

    Returns:
        Re-validated complex with ids renumbered by position.
    """
    doomed = {
        cell.id
        for cell in complex_.cells
        if cell.dim == dim and cell.label in (Label.A, Label.B)
    }
    if not doomed:
        return complex_
    cofaces = complex_.cofaces()
    stack = list(doomed)
    while stack:
        for coface in cofaces[stack.pop()]:
            if coface not in doomed:
                doomed.add(coface)
                stack.append(coface)
    logger.info("Stripping %d cell(s) inside the slabs.", len(doomed))
    kept = [cell_id for cell_id in complex_.order if cell_id not in doomed]
    return require_valid(complex_.subcomplex(kept))


def vertical_bottleneck(
    cloud: PointCloud,
    axis: int,
    center: Sequence[float],
    radius: float,
    grid: int = 41,
) -> float:
    """Widest clearance of a straight path parallel to ``axis``.

    Paths are sampled on a grid of the remaining coordinates, restricted to
    the disc of ``radius`` around ``center``; the clearance of a path is its
    distance to the nearest point.
    """
    others = [k for k in range(cloud.dimension) if k != axis]
    projected = cloud.points[:, others]
    ticks = np.linspace(0.0, 1.0, grid)
    mesh = np.stack(np.meshgrid(*([ticks] * len(others)), indexing="ij"), axis=-1)
    candidates = mesh.reshape(-1, len(others))
    offsets = candidates - np.asarray(center, dtype=np.float64)
    candidates = candidates[np.einsum("ij,ij->i", offsets, offsets) <= radius * radius]
    if not len(candidates):
        raise ValueError("No grid path lies within the requested disc.")
    gaps = candidates[:, None, :] - projected[None, :, :]
    clearance = np.sqrt(np.einsum("mnk,mnk->mn", gaps, gaps)).min(axis=1)
    return float(clearance.max())
