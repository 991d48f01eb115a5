"Event classification, cokernel pairing and representatives of open cobordisms."

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import Executor
from dataclasses import dataclass
from enum import Enum

from cobordia.complex import Block, CellId, Chain, FilteredComplex, Label, block_row_order
from cobordia.kernel import EventKind, KernelPairs
from cobordia.z2 import ReductionResult, RowOrder, SparseGF2Matrix, low, reduce

logger = logging.getLogger(__name__)


class CobordismError(RuntimeError):
    """Base error for the cobordism pipeline."""


class InvalidEventTriple(CobordismError):
    """Raised when the kernel events at one step match no admissible pattern."""


class PairingMismatch(CobordismError):
    """Raised when the reduced matrix disagrees with the classified events."""


class NotADeath(CobordismError):
    """Raised when a representative is requested for a cell without a double column."""


class NotInfinite(CobordismError):
    """Raised when an infinite representative is requested for a finite bar."""


class CaseLabel(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H = "H"
    NONE = "none"


# (A, B, A∪B) kernel events: "b" birth, "d" death, "-" nothing.
_CASES: dict[tuple[str, str, str], CaseLabel] = {
    ("b", "-", "b"): CaseLabel.A,
    ("-", "b", "b"): CaseLabel.B,
    ("b", "b", "b"): CaseLabel.C,
    ("d", "-", "d"): CaseLabel.D,
    ("-", "d", "d"): CaseLabel.E,
    ("-", "-", "b"): CaseLabel.F,
    ("b", "-", "-"): CaseLabel.G,
    ("-", "b", "-"): CaseLabel.H,
    ("-", "-", "-"): CaseLabel.NONE,
}

DEATH_CASES = frozenset({CaseLabel.C, CaseLabel.G, CaseLabel.H})


@dataclass(frozen=True)
class ClassifiedStep:
    position: int
    cell: CellId
    time: float
    degree: int
    triple: tuple[str, str, str]
    case: CaseLabel


class ColumnSource(str, Enum):
    CYCLE = "cycle"
    A_BIRTH = "A-birth"
    B_BIRTH = "B-birth"


@dataclass(frozen=True)
class PhiColumn:
    cell: CellId
    position: int
    source: ColumnSource
    degree: int


@dataclass(frozen=True)
class DPhi:
    """Matrix of cycle and relative-cycle columns for one degree, with provenance."""

    degree: int
    complex: FilteredComplex
    matrix: SparseGF2Matrix
    provenance: tuple[PhiColumn, ...]

    def columns_of(self, cell: CellId) -> list[int]:
        return [j for j, column in enumerate(self.provenance) if column.cell == cell]

    def is_double(self, cell: CellId) -> bool:
        return len(self.columns_of(cell)) == 2

    def double_cells(self) -> list[CellId]:
        seen: dict[CellId, int] = {}
        for column in self.provenance:
            seen[column.cell] = seen.get(column.cell, 0) + 1
        return [cell for cell, count in seen.items() if count == 2]


@dataclass(frozen=True)
class ReducedPhi:
    dphi: DPhi
    reduction: ReductionResult


@dataclass(frozen=True)
class CobordismPair:
    """One bar of the cokernel with its representatives."""

    degree: int
    birth_time: float
    birth_cell: CellId
    birth_position: int
    death_time: float
    death_cell: CellId | None
    death_position: int | None
    representative_at_birth: Chain
    representative_before_death: Chain | None
    case_at_birth: CaseLabel
    case_at_death: CaseLabel | None

    @property
    def is_infinite(self) -> bool:
        return self.death_cell is None

    @property
    def persistence(self) -> float:
        return self.death_time - self.birth_time

    def alive_at(self, position: int) -> bool:
        if self.birth_position > position:
            return False
        return self.death_position is None or self.death_position > position


@dataclass(frozen=True)
class CobordismResult:
    """Everything the pipeline produced for one complex."""

    complex: FilteredComplex
    kernels: dict[Block, KernelPairs]
    steps: tuple[ClassifiedStep, ...]
    dphis: dict[int, ReducedPhi]
    bars: tuple[CobordismPair, ...]

    def bars_in_degree(self, degree: int) -> list[CobordismPair]:
        return [bar for bar in self.bars if bar.degree == degree]

    def living_counts(self, degree: int, position: int) -> int:
        return sum(1 for bar in self.bars if bar.degree == degree and bar.alive_at(position))


def _mark(kind: EventKind | None) -> str:
    if kind is EventKind.BIRTH:
        return "b"
    if kind is EventKind.DEATH:
        return "d"
    return "-"


def classify_events(
    kp_a: KernelPairs, kp_b: KernelPairs, kp_ab: KernelPairs
) -> list[ClassifiedStep]:
    """Match the kernel events at every step against the admissible patterns.

    Raises:
        InvalidEventTriple: If a step's events match no pattern.
    """
    complex_ = kp_ab.complex
    steps: list[ClassifiedStep] = []
    for position, cell in enumerate(complex_.cells):
        triple = (
            _mark(kp_a.event_at(position)),
            _mark(kp_b.event_at(position)),
            _mark(kp_ab.event_at(position)),
        )
        case = _CASES.get(triple)
        if case is None:
            raise InvalidEventTriple(
                f"Events {triple} at cell {cell.id} (position {position}) match no case."
            )
        if case is not CaseLabel.NONE:
            logger.debug(
                "Step %d (cell %d, f=%s) is case %s.", position, cell.id, cell.f, case.value
            )
        steps.append(ClassifiedStep(position, cell.id, cell.f, cell.dim - 1, triple, case))
    return steps


def _in_own_block(kp: KernelPairs, position: int) -> bool:
    lowest = low(kp.r_im, position)
    return lowest is not None and kp.r_im.row_order.in_block(lowest)


def build_D_phi(  # noqa: N802
    kp_a: KernelPairs, kp_b: KernelPairs, row_order: RowOrder, degree: int
) -> DPhi:
    """Assemble the cokernel matrix for ``degree`` from the A and B reductions.

    Columns are indexed by the (degree+1)-cells in filtration order. A cell
    contributes its cycle column when its reduced column vanishes, and its
    ``V`` columns from the A and B runs when their lowest ones fall in the
    respective blocks. When both occur the B column goes after the A column
    iff the cell belongs to A.
    """
    complex_ = kp_a.complex
    columns: list[tuple[int, ...]] = []
    provenance: list[PhiColumn] = []

    def push(kp: KernelPairs, position: int, source: ColumnSource) -> None:
        columns.append(kp.v_im.column(position))
        provenance.append(PhiColumn(complex_.cell_at(position).id, position, source, degree))

    for position, cell in enumerate(complex_.cells):
        if cell.dim != degree + 1:
            continue
        if kp_a.r_im.is_zero(position):
            push(kp_a, position, ColumnSource.CYCLE)
            continue
        from_a = _in_own_block(kp_a, position)
        from_b = _in_own_block(kp_b, position)
        if from_a and from_b and cell.label is not Label.A:
            push(kp_b, position, ColumnSource.B_BIRTH)
            push(kp_a, position, ColumnSource.A_BIRTH)
        else:
            if from_a:
                push(kp_a, position, ColumnSource.A_BIRTH)
            if from_b:
                push(kp_b, position, ColumnSource.B_BIRTH)
    logger.debug("Cokernel matrix in degree %d has %d columns.", degree, len(columns))
    matrix = SparseGF2Matrix(columns, len(complex_), row_order)
    return DPhi(degree, complex_, matrix, tuple(provenance))


def reduce_D_phi(dphi: DPhi) -> ReducedPhi:  # noqa: N802
    return ReducedPhi(dphi, reduce(dphi.matrix))


def pair_cobordisms(
    dphi: DPhi | ReducedPhi,
    steps: Sequence[ClassifiedStep],
    kp_ab: KernelPairs | None = None,
) -> list[CobordismPair]:
    """Reduce the cokernel matrix and pair births with deaths.

    Every double column is a death; the lowest one of its reduced second
    column is the birth it kills. Case-F births left unmatched are infinite.

    Args:
        dphi: Matrix built by ``build_D_phi``, reduced or not.
        steps: Classified steps of the same complex.
        kp_ab: Kernel run on A∪B; supplies infinite representatives.

    Returns:
        Bars of degree ``dphi.degree`` ordered by birth position.

    Raises:
        PairingMismatch: If a death lands on a non-birth or the counts disagree.
    """
    reduced = dphi if isinstance(dphi, ReducedPhi) else reduce_D_phi(dphi)
    matrix = reduced.dphi
    R = reduced.reduction.R
    complex_ = matrix.complex
    row_order = matrix.matrix.row_order
    by_position = {step.position: step for step in steps}
    births = {
        step.position: step
        for step in steps
        if step.case is CaseLabel.F and step.degree == matrix.degree
    }
    expected_deaths = sum(
        1 for step in steps if step.case in DEATH_CASES and step.degree == matrix.degree
    )

    matched: dict[int, CobordismPair] = {}
    for first, second in _double_pairs(matrix):
        cell = matrix.provenance[first].cell
        lowest = low(R, second)
        if lowest is None or row_order.in_block(lowest):
            raise PairingMismatch(f"Second column of cell {cell} reduces to a low inside A∪B.")
        birth = births.get(lowest)
        if birth is None or lowest in matched:
            raise PairingMismatch(
                f"Death at cell {cell} points to position {lowest}, not a free birth."
            )
        death = by_position[matrix.provenance[first].position]
        if death.case not in DEATH_CASES:
            raise PairingMismatch(
                f"Double column at cell {cell} but the step is case {death.case.value}."
            )
        pair = CobordismPair(
            degree=matrix.degree,
            birth_time=birth.time,
            birth_cell=birth.cell,
            birth_position=birth.position,
            death_time=death.time,
            death_cell=death.cell,
            death_position=death.position,
            representative_at_birth=complex_.ids_at(R.column(second)),
            representative_before_death=_column_sum(matrix, first, second),
            case_at_birth=CaseLabel.F,
            case_at_death=death.case,
        )
        if pair.death_time == pair.birth_time:
            logger.warning(
                "Zero-length degree-%d bar at f=%s (cells %d, %d).",
                pair.degree,
                pair.birth_time,
                pair.birth_cell,
                death.cell,
            )
        matched[lowest] = pair

    if len(matched) != expected_deaths:
        raise PairingMismatch(
            f"Degree {matrix.degree}: {len(matched)} double columns, "
            f"{expected_deaths} death steps."
        )

    bars = list(matched.values())
    for position, step in births.items():
        if position in matched:
            continue
        representative: Chain = ()
        if kp_ab is not None:
            representative = representative_infinite(kp_ab, step.cell)
        bars.append(
            CobordismPair(
                degree=matrix.degree,
                birth_time=step.time,
                birth_cell=step.cell,
                birth_position=position,
                death_time=math.inf,
                death_cell=None,
                death_position=None,
                representative_at_birth=representative,
                representative_before_death=None,
                case_at_birth=CaseLabel.F,
                case_at_death=None,
            )
        )
    bars.sort(key=lambda bar: (bar.birth_position, _death_key(bar, len(complex_))))
    return bars


def _death_key(bar: CobordismPair, horizon: int) -> int:
    return horizon if bar.death_position is None else bar.death_position


def _double_pairs(dphi: DPhi) -> list[tuple[int, int]]:
    provenance = dphi.provenance
    return [
        (j, j + 1)
        for j in range(len(provenance) - 1)
        if provenance[j].cell == provenance[j + 1].cell
    ]


def _column_sum(dphi: DPhi, first: int, second: int) -> Chain:
    positions = set(dphi.matrix.column(first)) ^ set(dphi.matrix.column(second))
    return dphi.complex.ids_at(positions)


def _double_columns(dphi: DPhi, cell: CellId) -> tuple[int, int]:
    columns = dphi.columns_of(cell)
    if len(columns) != 2:
        raise NotADeath(f"Cell {cell} indexes {len(columns)} column(s), not a double column.")
    return columns[0], columns[1]


def representative_before_death(dphi: DPhi, cell: CellId) -> Chain:
    """Sum of the two columns of ``cell``, a chain present just before the death.

    Raises:
        NotADeath: If ``cell`` does not index a double column.
    """
    first, second = _double_columns(dphi, cell)
    return _column_sum(dphi, first, second)


def representative_at_birth(reduced: ReducedPhi, cell: CellId) -> Chain:
    """Reduced second column of ``cell``; its lowest one is the birth.

    Raises:
        NotADeath: If ``cell`` does not index a double column.
    """
    _, second = _double_columns(reduced.dphi, cell)
    return reduced.dphi.complex.ids_at(reduced.reduction.R.column(second))


def representative_infinite(
    kp_ab: KernelPairs,
    birth_cell: CellId,
    bars: Sequence[CobordismPair] | None = None,
) -> Chain:
    """Relative cycle of A∪B created by ``birth_cell``.

    Raises:
        NotInfinite: If the cell starts no A∪B kernel class, or ``bars`` shows
            that it starts a finite bar.
    """
    position = kp_ab.complex.position(birth_cell)
    if position not in kp_ab.representatives:
        raise NotInfinite(f"Cell {birth_cell} starts no class of the A∪B kernel.")
    if bars is not None and birth_cell not in {bar.birth_cell for bar in bars if bar.is_infinite}:
        raise NotInfinite(f"Cell {birth_cell} starts no infinite bar.")
    return kp_ab.representatives[position]


def low_cell(complex_: FilteredComplex, chain: Chain, block: Block = Block.AB) -> CellId | None:
    """Cell carrying the lowest one of ``chain`` when ``block`` rows come first."""
    row_order = block_row_order(complex_, block)
    lowest = row_order.low_of(complex_.positions_of(chain))
    return None if lowest is None else complex_.cell_at(lowest).id


def compute_cobordisms(
    kernels: dict[Block, KernelPairs],
    degrees: Sequence[int] | None = None,
    executor: Executor | None = None,
) -> CobordismResult:
    """Classify, build and pair every requested degree from finished kernel runs.

    Degrees are independent; with an ``executor`` they are processed concurrently.
    """
    kp_a, kp_b, kp_ab = kernels[Block.A], kernels[Block.B], kernels[Block.AB]
    complex_ = kp_ab.complex
    steps = classify_events(kp_a, kp_b, kp_ab)
    if degrees is None:
        degrees = list(range(max(complex_.dimension, 0)))
    row_order = block_row_order(complex_, Block.AB)

    def run_degree(degree: int) -> tuple[ReducedPhi, list[CobordismPair]]:
        reduced = reduce_D_phi(build_D_phi(kp_a, kp_b, row_order, degree))
        return reduced, pair_cobordisms(reduced, steps, kp_ab)

    outcomes = (
        list(executor.map(run_degree, degrees))
        if executor is not None
        else [run_degree(degree) for degree in degrees]
    )
    dphis: dict[int, ReducedPhi] = {}
    bars: list[CobordismPair] = []
    for degree, (reduced, degree_bars) in zip(degrees, outcomes, strict=True):
        dphis[degree] = reduced
        logger.info("Degree %d: %d cobordism bar(s).", degree, len(degree_bars))
        bars.extend(degree_bars)
    return CobordismResult(complex_, dict(kernels), tuple(steps), dphis, tuple(bars))
