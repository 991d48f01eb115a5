"Kernel persistence of the inclusion of a marked subcomplex into the whole complex."

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from cobordia.complex import (
    Block,
    CellId,
    Chain,
    FilteredComplex,
    block_row_order,
    boundary_matrix,
)
from cobordia.z2 import ReductionResult, SparseGF2Matrix, low, reduce

logger = logging.getLogger(__name__)


class KernelPairingError(RuntimeError):
    """Raised when a kernel death cannot be matched to a recorded birth."""


class EventKind(str, Enum):
    BIRTH = "birth"
    DEATH = "death"


@dataclass(frozen=True)
class KernelEvent:
    """A birth or death in the kernel, triggered by inserting ``cell``."""

    kind: EventKind
    degree: int
    time: float
    cell: CellId
    position: int


@dataclass(frozen=True)
class KernelPair:
    birth: KernelEvent
    death: KernelEvent | None = None

    @property
    def degree(self) -> int:
        return self.birth.degree

    @property
    def is_infinite(self) -> bool:
        return self.death is None

    def alive_at(self, position: int) -> bool:
        if self.birth.position > position:
            return False
        return self.death is None or self.death.position > position


@dataclass(frozen=True)
class KernelPairs:
    """Kernel barcode for one block together with the matrices that produced it."""

    block: Block
    complex: FilteredComplex
    pairs: tuple[KernelPair, ...]
    reduction_im: ReductionResult
    reduction_ker: ReductionResult
    ker_columns: tuple[int, ...]
    representatives: dict[int, Chain]
    _events: dict[int, EventKind] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        events: dict[int, EventKind] = {}
        for pair in self.pairs:
            events[pair.birth.position] = EventKind.BIRTH
            if pair.death is not None:
                events[pair.death.position] = EventKind.DEATH
        object.__setattr__(self, "_events", events)

    @property
    def r_im(self) -> SparseGF2Matrix:
        return self.reduction_im.R

    @property
    def v_im(self) -> SparseGF2Matrix:
        return self.reduction_im.V

    @property
    def r_ker(self) -> SparseGF2Matrix:
        return self.reduction_ker.R

    @property
    def v_ker(self) -> SparseGF2Matrix:
        return self.reduction_ker.V

    def event_at(self, position: int) -> EventKind | None:
        return self._events.get(position)

    def birth_positions(self) -> set[int]:
        return {pair.birth.position for pair in self.pairs}

    def zero_columns(self) -> frozenset[int]:
        return frozenset(self.ker_columns)

    def living(self, degree: int, position: int) -> int:
        return sum(
            1 for pair in self.pairs if pair.degree == degree and pair.alive_at(position)
        )


def build_D_im(complex_: FilteredComplex, block: Block) -> SparseGF2Matrix:  # noqa: N802
    """Boundary matrix whose rows list the block's cells first."""
    return boundary_matrix(complex_).with_row_order(block_row_order(complex_, block))


def kernel_births(
    complex_: FilteredComplex, reduction_im: ReductionResult, block: Block
) -> tuple[list[KernelEvent], dict[int, Chain]]:
    """Read kernel births off the reduced image matrix.

    A cell outside the block whose reduced column is non-zero with its lowest
    one inside the block gives birth to a class one degree below its own.

    Returns:
        Birth events in filtration order and, per birth position, the
        relative cycle from ``V_im`` that represents the class.
    """
    R = reduction_im.R
    events: list[KernelEvent] = []
    representatives: dict[int, Chain] = {}
    for j in range(R.n_cols):
        cell = complex_.cell_at(j)
        if block.contains(cell.label):
            continue
        lowest = low(R, j)
        if lowest is None or not R.row_order.in_block(lowest):
            continue
        events.append(KernelEvent(EventKind.BIRTH, cell.dim - 1, cell.f, cell.id, j))
        representatives[j] = complex_.ids_at(reduction_im.V.column(j))
    return events, representatives


def build_D_ker(reduction_im: ReductionResult) -> SparseGF2Matrix:  # noqa: N802
    """Cycle columns of ``V_im`` (where ``R_im`` vanishes), rows block-first."""
    zero = reduction_im.zero_columns()
    return reduction_im.V.select_columns(zero).with_row_order(reduction_im.R.row_order)


def kernel_pairs(complex_: FilteredComplex, block: Block) -> KernelPairs:
    """Compute the kernel barcode of the inclusion of ``block`` in the complex.

    Raises:
        KernelPairingError: If a death's lowest row is not a recorded birth.
    """
    reduction_im = reduce(build_D_im(complex_, block))
    births, representatives = kernel_births(complex_, reduction_im, block)
    by_position = {event.position: event for event in births}

    ker_columns = reduction_im.zero_columns()
    reduction_ker = reduce(build_D_ker(reduction_im))
    row_order = reduction_ker.R.row_order
    deaths: dict[int, KernelEvent] = {}
    for column, position in enumerate(ker_columns):
        cell = complex_.cell_at(position)
        if not block.contains(cell.label):
            continue
        lowest = low(reduction_ker.R, column)
        if lowest is None or row_order.in_block(lowest):
            continue
        birth = by_position.get(lowest)
        if birth is None or birth.degree != cell.dim - 1:
            raise KernelPairingError(
                f"Death at cell {cell.id} in block {block.value} points to "
                f"position {lowest}, which is not a degree-{cell.dim - 1} birth."
            )
        if lowest in deaths:
            raise KernelPairingError(
                f"Death at cell {cell.id} in block {block.value} repeats the pivot at "
                f"position {lowest}, already closed by cell {deaths[lowest].cell}."
            )
        deaths[lowest] = KernelEvent(EventKind.DEATH, cell.dim - 1, cell.f, cell.id, position)

    pairs = tuple(KernelPair(birth, deaths.get(birth.position)) for birth in births)
    logger.info(
        "Kernel of block %s: %d births, %d deaths.", block.value, len(births), len(deaths)
    )
    return KernelPairs(
        block=block,
        complex=complex_,
        pairs=pairs,
        reduction_im=reduction_im,
        reduction_ker=reduction_ker,
        ker_columns=ker_columns,
        representatives=representatives,
    )
