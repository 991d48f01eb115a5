"Dual Voronoi filtration of a Delaunay complex and tunnel detection on it."

from __future__ import annotations

import logging
from collections.abc import Collection
from dataclasses import dataclass

from cobordia.cobordism import CobordismPair, compute_cobordisms
from cobordia.complex import Block, Cell, FilteredComplex, Label, require_valid
from cobordia.geometry.alpha import PointCloud, SliceSpec, circumsphere
from cobordia.kernel import kernel_pairs

logger = logging.getLogger(__name__)


class DualError(ValueError):
    """Base error for dual complex construction."""


class NotFullDimensional(DualError):
    """Raised when the primal complex has no top-dimensional cells."""


@dataclass(frozen=True)
class DualComplex:
    """Dual filtration with the map back to primal cells.

    The dual of the primal cell at position ``p`` sits at position
    ``N - 1 - p``, has dimension ``d - dim`` and value ``-f``. Its boundary
    is the set of duals of the primal cofaces.
    """

    complex: FilteredComplex
    primal: FilteredComplex
    ambient_dim: int
    primal_of: tuple[int, ...]

    def dual_of(self, primal_id: int) -> int:
        return len(self.primal) - 1 - self.primal.position(primal_id)

    def vertices(self) -> list[int]:
        return [cell.id for cell in self.complex.cells if cell.dim == 0]

    def unbounded(self) -> set[int]:
        """Dual edges with fewer than two endpoints, and every cell above them."""
        cofaces = self.complex.cofaces()
        stack = [
            cell.id for cell in self.complex.cells if cell.dim == 1 and len(cell.boundary) != 2
        ]
        marked = set(stack)
        while stack:
            for coface in cofaces[stack.pop()]:
                if coface not in marked:
                    marked.add(coface)
                    stack.append(coface)
        return marked


def dualize(complex_: FilteredComplex, ambient_dim: int) -> DualComplex:
    """Anti-transpose the boundary structure and negate the filtration.

    Raises:
        NotFullDimensional: If no cell has dimension ``ambient_dim`` or a cell
            exceeds it.
    """
    if complex_.dimension != ambient_dim:
        raise NotFullDimensional(
            f"Complex has dimension {complex_.dimension}, expected {ambient_dim}."
        )
    size = len(complex_)
    cofaces = complex_.cofaces()
    cells: list[Cell] = []
    primal_of: list[int] = []
    for dual_position in range(size):
        primal = complex_.cell_at(size - 1 - dual_position)
        cells.append(
            Cell(
                id=dual_position,
                dim=ambient_dim - primal.dim,
                boundary=tuple(size - 1 - complex_.position(c) for c in cofaces[primal.id]),
                f=-primal.f,
                label=Label.INTERIOR,
                simplex=primal.simplex,
            )
        )
        primal_of.append(primal.id)
    return DualComplex(
        FilteredComplex(cells, list(range(size))), complex_, ambient_dim, tuple(primal_of)
    )


@dataclass(frozen=True)
class DualTunnel:
    """Cokernel bar of the dual filtration, read in radius units."""

    pair: CobordismPair
    floor: float

    @property
    def bottleneck_radius(self) -> float:
        return -self.pair.birth_time

    @property
    def separation_radius(self) -> float:
        if self.pair.is_infinite:
            return self.floor
        return -self.pair.death_time

    @property
    def persistence(self) -> float:
        return self.bottleneck_radius - self.separation_radius


def _label_dual(
    dual: FilteredComplex, a_star: Collection[int], b_star: Collection[int]
) -> FilteredComplex:
    labels: dict[int, Label] = {}
    for cell in dual.cells:
        if cell.dim == 0:
            in_a, in_b = cell.id in a_star, cell.id in b_star
            if in_a and in_b:
                labels[cell.id] = Label.BOTH
            elif in_a:
                labels[cell.id] = Label.A
            elif in_b:
                labels[cell.id] = Label.B
            continue
        face_labels = {labels.get(face, Label.INTERIOR) for face in cell.boundary}
        if cell.dim == 1 and len(cell.boundary) != 2:
            continue
        if len(face_labels) == 1 and face_labels <= {Label.A, Label.B}:
            labels[cell.id] = face_labels.pop()
    return dual.with_labels(labels)


def dual_tunnels(
    dual: DualComplex,
    a_star: Collection[int],
    b_star: Collection[int],
    keep_unbounded: bool = False,
    degrees: Collection[int] = (0,),
) -> list[DualTunnel]:
    """Tunnels between two sets of dual vertices, degree 0 unless ``degrees`` says otherwise.

    Args:
        dual: Dual complex from ``dualize``.
        a_star: Dual vertex ids forming A.
        b_star: Dual vertex ids forming B.
        keep_unbounded: Keep dual cells touching infinity.
        degrees: Degrees to pair; tunnels joining the slabs live in degree 0.

    Returns:
        Tunnels ordered by decreasing bottleneck radius.

    Raises:
        ComplexError: If the labeled dual complex is invalid, for example
            when the two sets overlap or one is empty.
    """
    labeled = _label_dual(dual.complex, a_star, b_star)
    if not keep_unbounded:
        dropped = dual.unbounded()
        labeled = labeled.subcomplex(c for c in labeled.order if c not in dropped)
    labeled = require_valid(labeled)
    kernels = {block: kernel_pairs(labeled, block) for block in Block}
    result = compute_cobordisms(kernels, degrees=sorted(set(degrees)))
    floor = -max(cell.f for cell in labeled.cells)
    tunnels = [DualTunnel(bar, floor) for bar in result.bars]
    tunnels.sort(key=lambda tunnel: (-tunnel.bottleneck_radius, tunnel.separation_radius))
    logger.info("Found %d dual tunnel(s).", len(tunnels))
    return tunnels


def slab_dual_vertices(
    dual: DualComplex,
    cloud: PointCloud,
    spec: SliceSpec,
    include_hull: bool = False,
) -> tuple[set[int], set[int]]:
    """Dual vertices whose primal top simplex has its circumcenter in a slab.

    Vertices dual to simplices with a convex-hull facet are skipped unless
    ``include_hull`` is set.
    """
    primal = dual.primal
    cofaces = primal.cofaces()
    a_star: set[int] = set()
    b_star: set[int] = set()
    for dual_id in dual.vertices():
        cell = primal.cell(dual.primal_of[dual_id])
        if cell.simplex is None:
            raise DualError(f"Primal cell {cell.id} carries no vertex tuple.")
        if not include_hull and any(len(cofaces[face]) < 2 for face in cell.boundary):
            continue
        center, _ = circumsphere(cloud.points[list(cell.simplex)])
        coordinate = float(center[spec.axis])
        if coordinate >= 1.0 - spec.epsilon:
            a_star.add(dual_id)
        elif coordinate <= spec.epsilon:
            b_star.add(dual_id)
    logger.info(
        "Slab heuristic picked %d top and %d bottom dual vertices (hull %s).",
        len(a_star),
        len(b_star),
        "included" if include_hull else "excluded",
    )
    return a_star, b_star


def sublevel_primal(dual: DualComplex, radius: float) -> set[int]:
    """Primal ids whose duals satisfy ``f* < -radius``."""
    return {
        dual.primal_of[cell.id] for cell in dual.complex.cells if cell.f < -radius
    }

