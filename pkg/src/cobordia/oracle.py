"Dense GF(2) linear algebra used to cross-check barcodes on small complexes."

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from cobordia.complex import Block, CellId, FilteredComplex

logger = logging.getLogger(__name__)

DEFAULT_MAX_CELLS = 40


class SizeLimitExceeded(ValueError):
    """Raised when a complex is too large for dense elimination."""


class _Basis:
    """Echelon basis of GF(2) vectors stored as int bitsets keyed by leading bit."""

    def __init__(self, pivots: dict[int, int] | None = None) -> None:
        self._pivots: dict[int, int] = dict(pivots or {})

    def __len__(self) -> int:
        return len(self._pivots)

    def copy(self) -> _Basis:
        return _Basis(self._pivots)

    def residue(self, vector: int) -> int:
        while vector:
            top = vector.bit_length() - 1
            pivot = self._pivots.get(top)
            if pivot is None:
                return vector
            vector ^= pivot
        return 0

    def insert(self, vector: int) -> bool:
        vector = self.residue(vector)
        if not vector:
            return False
        self._pivots[vector.bit_length() - 1] = vector
        return True

    def extend(self, vectors: Iterable[int]) -> _Basis:
        for vector in vectors:
            self.insert(vector)
        return self


def _bits(positions: Iterable[int]) -> int:
    value = 0
    for position in positions:
        value ^= 1 << position
    return value


def _boundary(complex_: FilteredComplex, position: int) -> int:
    return _bits(complex_.position(face) for face in complex_.cell_at(position).boundary)


def _cells(
    complex_: FilteredComplex, step: int, dim: int, block: Block | None = None
) -> list[int]:
    return [
        position
        for position in range(min(step, len(complex_) - 1) + 1)
        if complex_.cell_at(position).dim == dim
        and (block is None or block.contains(complex_.cell_at(position).label))
    ]


def _outside_mask(complex_: FilteredComplex, block: Block | None) -> int:
    if block is None:
        return (1 << len(complex_)) - 1
    return _bits(
        position
        for position, cell in enumerate(complex_.cells)
        if not block.contains(cell.label)
    )


def _rank(vectors: Iterable[int]) -> int:
    return len(_Basis().extend(vectors))


def _nullspace(columns: Sequence[tuple[int, int]]) -> list[int]:
    """Kernel basis of the map sending each ``source`` bitset to its ``image``."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for image, source in columns:
        while image:
            top = image.bit_length() - 1
            if top not in pivots:
                pivots[top] = (image, source)
                break
            pivot_image, pivot_source = pivots[top]
            image ^= pivot_image
            source ^= pivot_source
        if not image:
            kernel.append(source)
    return kernel


def _cycles(complex_: FilteredComplex, step: int, dim: int, block: Block | None) -> list[int]:
    return _nullspace(
        [(_boundary(complex_, p), 1 << p) for p in _cells(complex_, step, dim, block)]
    )


def _boundaries(
    complex_: FilteredComplex, step: int, dim: int, block: Block | None
) -> list[int]:
    return [_boundary(complex_, p) for p in _cells(complex_, step, dim + 1, block)]


def _relative_cycles(
    complex_: FilteredComplex, step: int, dim: int, block: Block
) -> list[int]:
    """``dim``-chains of the complex whose boundary lies in ``block``."""
    mask = _outside_mask(complex_, block)
    return _nullspace(
        [(_boundary(complex_, p) & mask, 1 << p) for p in _cells(complex_, step, dim)]
    )


def homology_dims(
    complex_: FilteredComplex, step: int, relative_to: Block | None = None
) -> dict[int, int]:
    """Betti numbers of the sublevel complex at ``step``, optionally relative to a block.

    Args:
        complex_: Totalized complex.
        step: Position of the last included cell.
        relative_to: Block to quotient by, or None for absolute homology.

    Returns:
        Dimension of homology per degree ``0..dim``.
    """
    mask = _outside_mask(complex_, relative_to)
    dims: dict[int, int] = {}
    for k in range(max(complex_.dimension, 0) + 1):
        chains = [p for p in _cells(complex_, step, k) if mask >> p & 1]
        higher = [p for p in _cells(complex_, step, k + 1) if mask >> p & 1]
        rank_k = _rank(_boundary(complex_, p) & mask for p in chains)
        rank_k1 = _rank(_boundary(complex_, p) & mask for p in higher)
        dims[k] = len(chains) - rank_k - rank_k1
    return dims


def kernel_dims(complex_: FilteredComplex, step: int, block: Block) -> dict[int, int]:
    """Dimension of the kernel of ``H_k(S) -> H_k(X)`` per degree at ``step``."""
    dims: dict[int, int] = {}
    for k in range(max(complex_.dimension, 0) + 1):
        cycles_s = _cycles(complex_, step, k, block)
        boundaries_s = _rank(_boundaries(complex_, step, k, block))
        boundaries_x = _boundaries(complex_, step, k, None)
        rank_x = _rank(boundaries_x)
        joint = len(_Basis().extend(boundaries_x).extend(cycles_s))
        dims[k] = len(cycles_s) - boundaries_s - (joint - rank_x)
    return dims


def cok_phi_dims(complex_: FilteredComplex, step: int) -> dict[int, int]:
    """Cokernel dimension per degree, as kernel(A∪B) minus kernel(A) minus kernel(B)."""
    a = kernel_dims(complex_, step, Block.A)
    b = kernel_dims(complex_, step, Block.B)
    ab = kernel_dims(complex_, step, Block.AB)
    return {k: ab[k] - a[k] - b[k] for k in ab}


def living_cok_dims(
    complex_: FilteredComplex, max_cells: int = DEFAULT_MAX_CELLS
) -> list[dict[int, int]]:
    """Cokernel dimensions at every step, indexed by position.

    Raises:
        SizeLimitExceeded: If the complex has more than ``max_cells`` cells.
    """
    if len(complex_) > max_cells:
        raise SizeLimitExceeded(
            f"Complex has {len(complex_)} cells; the oracle accepts {max_cells}."
        )
    return [cok_phi_dims(complex_, step) for step in range(len(complex_))]


@dataclass(frozen=True)
class RankTable:
    """Ranks of the maps between cokernels at steps ``i <= j`` in one degree."""

    degree: int
    size: int
    ranks: dict[tuple[int, int], int]

    def rank(self, i: int, j: int) -> int:
        if i < 0 or j < 0:
            return 0
        return self.ranks[(i, j)]

    def dim(self, i: int) -> int:
        return self.rank(i, i)


def rank_table(complex_: FilteredComplex, degree: int) -> RankTable:
    """Rank of ``Cok(i) -> Cok(j)`` computed on explicit chain-level bases."""
    size = len(complex_)
    cobordant = [_relative_cycles(complex_, i, degree + 1, Block.AB) for i in range(size)]
    ranks: dict[tuple[int, int], int] = {}
    for j in range(size):
        decomposable = _Basis()
        decomposable.extend(_relative_cycles(complex_, j, degree + 1, Block.A))
        decomposable.extend(_relative_cycles(complex_, j, degree + 1, Block.B))
        for i in range(j + 1):
            ranks[(i, j)] = len(decomposable.copy().extend(cobordant[i])) - len(decomposable)
    return RankTable(degree, size, ranks)


@dataclass(frozen=True)
class OracleBar:
    degree: int
    birth_position: int
    death_position: int | None
    birth_time: float
    death_time: float

    def key(self) -> tuple[int, int, int | None]:
        return (self.degree, self.birth_position, self.death_position)


def oracle_barcode(
    complex_: FilteredComplex, max_cells: int = DEFAULT_MAX_CELLS
) -> list[OracleBar]:
    """Cokernel barcode by inclusion-exclusion over the rank function.

    Raises:
        SizeLimitExceeded: If the complex has more than ``max_cells`` cells.
    """
    size = len(complex_)
    if size > max_cells:
        raise SizeLimitExceeded(f"Complex has {size} cells; the oracle accepts {max_cells}.")
    bars: list[OracleBar] = []
    last = size - 1
    for degree in range(max(complex_.dimension, 0)):
        table = rank_table(complex_, degree)
        for b in range(size):
            for d in range(b + 1, size):
                multiplicity = (
                    table.rank(b, d - 1)
                    - table.rank(b, d)
                    - table.rank(b - 1, d - 1)
                    + table.rank(b - 1, d)
                )
                bars.extend(
                    OracleBar(degree, b, d, complex_.cell_at(b).f, complex_.cell_at(d).f)
                    for _ in range(multiplicity)
                )
            infinite = table.rank(b, last) - table.rank(b - 1, last)
            bars.extend(
                OracleBar(degree, b, None, complex_.cell_at(b).f, float("inf"))
                for _ in range(infinite)
            )
    logger.debug("Oracle found %d bar(s) on %d cells.", len(bars), size)
    return bars


def is_boundary(
    complex_: FilteredComplex,
    chain: Iterable[CellId],
    step: int,
    block: Block | None = None,
) -> bool:
    """Whether ``chain`` bounds inside ``block`` (or the whole complex) at ``step``."""
    cells = list(chain)
    if not cells:
        return True
    vector = _bits(complex_.position(cell_id) for cell_id in cells)
    dim = complex_.cell(cells[0]).dim
    basis = _Basis().extend(_boundaries(complex_, step, dim, block))
    return basis.residue(vector) == 0


def is_cycle(complex_: FilteredComplex, chain: Iterable[CellId]) -> bool:
    return not complex_.chain_boundary(chain)


def compare_barcodes(
    left: Iterable[tuple[int, int, int | None]], right: Iterable[tuple[int, int, int | None]]
) -> tuple[list[tuple[int, int, int | None]], list[tuple[int, int, int | None]]]:
    """Bars present only on the left and only on the right, as multisets."""
    left_counts = Counter(left)
    right_counts = Counter(right)
    return (
        sorted((left_counts - right_counts).elements(), key=_bar_sort_key),
        sorted((right_counts - left_counts).elements(), key=_bar_sort_key),
    )


def _bar_sort_key(bar: tuple[int, int, int | None]) -> tuple[int, int, int]:
    degree, birth, death = bar
    return (degree, birth, -1 if death is None else death)
