"Filtered cell complexes with two marked subcomplexes A and B."

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum

from cobordia.z2 import RowOrder, SparseGF2Matrix

logger = logging.getLogger(__name__)

CellId = int
Chain = tuple[CellId, ...]


class Label(str, Enum):
    """Membership of a cell in the marked subcomplexes."""

    A = "A"
    B = "B"
    INTERIOR = "I"
    BOTH = "AB"


class Block(str, Enum):
    """Subcomplex whose rows are moved to the front of a matrix."""

    A = "A"
    B = "B"
    AB = "AB"

    def contains(self, label: Label) -> bool:
        if self is Block.A:
            return label in (Label.A, Label.BOTH)
        if self is Block.B:
            return label in (Label.B, Label.BOTH)
        return label is not Label.INTERIOR


class TieBreak(str, Enum):
    """Resolution of equal filtration values."""

    INPUT_ORDER = "input-order"
    REVERSED_INPUT = "reversed-input"

    def key(self, cell: Cell) -> tuple[float, int, int]:
        index = cell.id if self is TieBreak.INPUT_ORDER else -cell.id
        return (cell.f, cell.dim, index)


class ComplexError(ValueError):
    """Raised when a complex is structurally invalid."""

    def __init__(self, message: str, report: ValidationReport | None = None) -> None:
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Cell:
    """A cell with its GF(2) boundary, filtration value and label."""

    id: CellId
    dim: int
    boundary: tuple[CellId, ...]
    f: float
    label: Label = Label.INTERIOR
    simplex: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        boundary = tuple(sorted(self.boundary))
        if len(set(boundary)) != len(boundary):
            raise ComplexError(f"Cell {self.id} lists a face more than once: {boundary}.")
        object.__setattr__(self, "boundary", boundary)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> set[str]:
        return {violation.code for violation in self.violations}

    def lines(self) -> list[str]:
        return [f"{violation.code}: {violation.message}" for violation in self.violations]


class FilteredComplex:
    """Immutable cell complex with a total order on its cells.

    When ``order`` is omitted the cells are ordered by ``(f, dim, id)``.
    """

    def __init__(self, cells: Iterable[Cell], order: Sequence[CellId] | None = None) -> None:
        by_id: dict[CellId, Cell] = {}
        for cell in cells:
            if cell.id in by_id:
                raise ComplexError(f"Duplicate cell id {cell.id}.")
            by_id[cell.id] = cell
        if order is None:
            order = [cell.id for cell in sorted(by_id.values(), key=TieBreak.INPUT_ORDER.key)]
        if sorted(order) != sorted(by_id):
            raise ComplexError("Order must list every cell id exactly once.")
        self._by_id = by_id
        self._order: tuple[CellId, ...] = tuple(order)
        self._position = {cell_id: pos for pos, cell_id in enumerate(self._order)}

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[Cell]:
        return (self._by_id[cell_id] for cell_id in self._order)

    def __repr__(self) -> str:
        return f"FilteredComplex(cells={len(self)}, dimension={self.dimension})"

    @property
    def order(self) -> tuple[CellId, ...]:
        return self._order

    @property
    def cells(self) -> tuple[Cell, ...]:
        return tuple(self._by_id[cell_id] for cell_id in self._order)

    @property
    def dimension(self) -> int:
        return max((cell.dim for cell in self._by_id.values()), default=-1)

    def cell(self, cell_id: CellId) -> Cell:
        return self._by_id[cell_id]

    def has_cell(self, cell_id: CellId) -> bool:
        return cell_id in self._by_id

    def cell_at(self, position: int) -> Cell:
        return self._by_id[self._order[position]]

    def position(self, cell_id: CellId) -> int:
        return self._position[cell_id]

    def ids_at(self, positions: Iterable[int]) -> Chain:
        return tuple(self._order[pos] for pos in sorted(positions))

    def positions_of(self, chain: Iterable[CellId]) -> list[int]:
        return sorted(self._position[cell_id] for cell_id in chain)

    def ids_in(self, block: Block) -> Chain:
        return tuple(
            cell_id for cell_id in self._order if block.contains(self._by_id[cell_id].label)
        )

    def chain_boundary(self, chain: Iterable[CellId]) -> Chain:
        """GF(2) boundary of a chain, ordered by position."""
        acc: set[CellId] = set()
        for cell_id in chain:
            acc.symmetric_difference_update(self._by_id[cell_id].boundary)
        return tuple(sorted(acc, key=self._position.__getitem__))

    def split_by_label(self, chain: Iterable[CellId]) -> dict[Label, Chain]:
        parts: dict[Label, list[CellId]] = {}
        for cell_id in sorted(chain, key=self._position.__getitem__):
            parts.setdefault(self._by_id[cell_id].label, []).append(cell_id)
        return {label: tuple(ids) for label, ids in parts.items()}

    def cofaces(self) -> dict[CellId, tuple[CellId, ...]]:
        result: dict[CellId, list[CellId]] = {cell_id: [] for cell_id in self._order}
        for cell_id in self._order:
            for face in self._by_id[cell_id].boundary:
                if face in result:
                    result[face].append(cell_id)
        return {cell_id: tuple(ids) for cell_id, ids in result.items()}

    def with_labels(self, labels: Mapping[CellId, Label]) -> FilteredComplex:
        """Return a copy with the given labels replaced; order is kept."""
        cells = [
            replace(cell, label=labels[cell.id]) if cell.id in labels else cell
            for cell in self.cells
        ]
        return FilteredComplex(cells, self._order)

    def subcomplex(self, keep: Iterable[CellId]) -> FilteredComplex:
        """Return the kept cells renumbered densely in order of position."""
        kept = sorted(set(keep), key=self._position.__getitem__)
        renumber = {old: new for new, old in enumerate(kept)}
        cells = []
        for old in kept:
            cell = self._by_id[old]
            if any(face not in renumber for face in cell.boundary):
                raise ComplexError(f"Cell {old} kept without all of its faces.")
            cells.append(
                replace(cell, id=renumber[old], boundary=tuple(renumber[b] for b in cell.boundary))
            )
        return FilteredComplex(cells, list(range(len(cells))))


def validate(complex_: FilteredComplex) -> ValidationReport:
    """Check every structural invariant and report all violations.

    Args:
        complex_: Complex to check.

    Returns:
        ValidationReport; empty when the complex is valid.
    """
    violations: list[Violation] = []

    def flag(code: str, message: str) -> None:
        violations.append(Violation(code, message))

    cells = complex_.cells
    if sorted(cell.id for cell in cells) != list(range(len(cells))):
        flag("ids-not-dense", "cell ids are not the dense range 0..N-1")

    known = {cell.id: cell for cell in cells}
    boundaries_ok = True
    for cell in cells:
        if not math.isfinite(cell.f):
            flag("non-finite-f", f"cell {cell.id} has filtration value {cell.f}")
        if cell.dim < 0:
            flag("negative-dimension", f"cell {cell.id} has dimension {cell.dim}")
        if cell.dim == 0 and cell.boundary:
            flag("boundary-dimension", f"vertex {cell.id} has a non-empty boundary")
        for face in cell.boundary:
            if face not in known:
                flag("unknown-boundary-cell", f"cell {cell.id} references missing cell {face}")
                boundaries_ok = False
            elif known[face].dim != cell.dim - 1:
                flag(
                    "boundary-dimension",
                    f"cell {cell.id} of dimension {cell.dim} has face {face} "
                    f"of dimension {known[face].dim}",
                )

    if boundaries_ok:
        for cell in cells:
            twice: set[CellId] = set()
            for face in cell.boundary:
                twice.symmetric_difference_update(known[face].boundary)
            if twice:
                flag("boundary-not-zero", f"boundary of boundary of cell {cell.id} is non-zero")
            for face in cell.boundary:
                if known[face].f > cell.f:
                    flag(
                        "non-monotone",
                        f"face {face} (f={known[face].f}) enters after cell {cell.id} (f={cell.f})",
                    )
                if complex_.position(face) > complex_.position(cell.id):
                    flag("order-inconsistent", f"face {face} is ordered after cell {cell.id}")

    for previous, current in zip(cells, cells[1:], strict=False):
        if previous.f > current.f:
            flag(
                "order-inconsistent",
                f"cell {current.id} (f={current.f}) follows cell {previous.id} (f={previous.f})",
            )

    for cell in cells:
        if cell.label is Label.BOTH:
            flag("labels-not-disjoint", f"labels not disjoint: cell {cell.id} is in A and B")

    if boundaries_ok:
        for name, block in (("A", Block.A), ("B", Block.B)):
            for cell in cells:
                if not block.contains(cell.label):
                    continue
                for face in cell.boundary:
                    if not block.contains(known[face].label):
                        flag(
                            f"{name}-not-closed",
                            f"{name} not face-closed: cell {cell.id} has face {face} "
                            f"labeled {known[face].label.value}",
                        )

    for name, label in (("A", Label.A), ("B", Label.B)):
        if not any(cell.label in (label, Label.BOTH) for cell in cells):
            flag(f"empty-{name}", f"subcomplex {name} is empty")

    return ValidationReport(tuple(violations))


def require_valid(complex_: FilteredComplex) -> FilteredComplex:
    """Return the complex unchanged or raise ComplexError with the report."""
    report = validate(complex_)
    if not report.ok:
        for line in report.lines():
            logger.debug("Violation %s", line)
        raise ComplexError(
            f"Complex has {len(report.violations)} violation(s): {report.lines()[0]}",
            report,
        )
    return complex_


def totalize_filtration(
    complex_: FilteredComplex, tie_break: TieBreak = TieBreak.INPUT_ORDER
) -> FilteredComplex:
    """Order cells by ``(f, dim, ±id)`` while keeping the original f values."""
    order = [cell.id for cell in sorted(complex_.cells, key=tie_break.key)]
    return FilteredComplex(complex_.cells, order)


def boundary_matrix(complex_: FilteredComplex) -> SparseGF2Matrix:
    """Boundary matrix with rows and columns indexed by position."""
    columns = (
        [complex_.position(face) for face in cell.boundary] for cell in complex_.cells
    )
    return SparseGF2Matrix(columns, len(complex_))


def block_row_order(complex_: FilteredComplex, block: Block) -> RowOrder:
    """Row order listing the block's cells first, then the rest, each by position."""
    inside: list[int] = []
    outside: list[int] = []
    for position, cell in enumerate(complex_.cells):
        (inside if block.contains(cell.label) else outside).append(position)
    return RowOrder(tuple(inside + outside), block_size=len(inside))


@dataclass(frozen=True)
class ComplexSummary:
    """Cell counts per dimension and per label."""

    by_dimension: dict[int, int] = field(default_factory=dict)
    by_label: dict[str, int] = field(default_factory=dict)


def summarize(complex_: FilteredComplex) -> ComplexSummary:
    by_dimension: dict[int, int] = {}
    by_label: dict[str, int] = {}
    for cell in complex_.cells:
        by_dimension[cell.dim] = by_dimension.get(cell.dim, 0) + 1
        by_label[cell.label.value] = by_label.get(cell.label.value, 0) + 1
    return ComplexSummary(dict(sorted(by_dimension.items())), dict(sorted(by_label.items())))
