"Sparse GF(2) column matrices and the standard left-to-right reduction."

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)


class MatrixShapeError(ValueError):
    """Raised when a row or column index falls outside a matrix."""


@dataclass(frozen=True)
class RowOrder:
    """Order in which rows are compared when looking for the lowest one.

    ``sequence[r]`` is the row index ranked ``r``. The first ``block_size``
    entries form the designated block.
    """

    sequence: tuple[int, ...]
    block_size: int = 0
    _rank: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        rank = [-1] * len(self.sequence)
        for position, row in enumerate(self.sequence):
            if not 0 <= row < len(self.sequence) or rank[row] != -1:
                raise MatrixShapeError("Row order must be a permutation of 0..n-1.")
            rank[row] = position
        if not 0 <= self.block_size <= len(self.sequence):
            raise MatrixShapeError(
                f"Block size {self.block_size} exceeds {len(self.sequence)} rows."
            )
        object.__setattr__(self, "_rank", tuple(rank))

    @classmethod
    def identity(cls, n_rows: int) -> RowOrder:
        return cls(tuple(range(n_rows)))

    @classmethod
    def reversed_identity(cls, n_rows: int) -> RowOrder:
        return cls(tuple(reversed(range(n_rows))))

    def __len__(self) -> int:
        return len(self.sequence)

    def rank(self, row: int) -> int:
        return self._rank[row]

    def in_block(self, row: int) -> bool:
        return self._rank[row] < self.block_size

    def low_of(self, rows: Iterable[int]) -> int | None:
        """Return the row ranked last among ``rows``, or None when empty."""
        return max(rows, key=self._rank.__getitem__, default=None)


class SparseGF2Matrix:
    """Column-major GF(2) matrix storing each column as a set of row indices."""

    def __init__(
        self,
        columns: Iterable[Iterable[int]],
        n_rows: int,
        row_order: RowOrder | None = None,
    ) -> None:
        self._columns: list[set[int]] = [set(column) for column in columns]
        self.n_rows = n_rows
        for j, column in enumerate(self._columns):
            for row in column:
                if not 0 <= row < n_rows:
                    raise MatrixShapeError(f"Row {row} of column {j} outside 0..{n_rows - 1}.")
        if row_order is None:
            row_order = RowOrder.identity(n_rows)
        elif len(row_order) != n_rows:
            raise MatrixShapeError(
                f"Row order covers {len(row_order)} rows, matrix has {n_rows}."
            )
        self.row_order = row_order

    @classmethod
    def identity(cls, size: int) -> SparseGF2Matrix:
        return cls(([j] for j in range(size)), size)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> SparseGF2Matrix:
        return cls(([] for _ in range(n_cols)), n_rows)

    @property
    def n_cols(self) -> int:
        return len(self._columns)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def column(self, j: int) -> tuple[int, ...]:
        """Return column ``j`` as increasing row indices."""
        self._check_column(j)
        return tuple(sorted(self._columns[j]))

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(sorted(column)) for column in self._columns]

    def is_zero(self, j: int) -> bool:
        self._check_column(j)
        return not self._columns[j]

    def nnz(self) -> int:
        return sum(len(column) for column in self._columns)

    def copy(self) -> SparseGF2Matrix:
        return SparseGF2Matrix(self._columns, self.n_rows, self.row_order)

    def with_row_order(self, row_order: RowOrder) -> SparseGF2Matrix:
        """Return a copy that compares rows under ``row_order``."""
        return SparseGF2Matrix(self._columns, self.n_rows, row_order)

    def select_columns(self, indices: Sequence[int]) -> SparseGF2Matrix:
        return SparseGF2Matrix(
            (self._columns[j] for j in indices), self.n_rows, self.row_order
        )

    def transpose(self) -> SparseGF2Matrix:
        rows: list[set[int]] = [set() for _ in range(self.n_rows)]
        for j, column in enumerate(self._columns):
            for row in column:
                rows[row].add(j)
        return SparseGF2Matrix(rows, self.n_cols)

    def anti_transpose(self) -> SparseGF2Matrix:
        """Transpose, then reverse both the row and the column order."""
        last_row = self.n_cols - 1
        flipped: list[set[int]] = [set() for _ in range(self.n_rows)]
        for j, column in enumerate(self._columns):
            for row in column:
                flipped[self.n_rows - 1 - row].add(last_row - j)
        return SparseGF2Matrix(flipped, self.n_cols)

    def dump(self) -> str:
        """Render one line per column with ``-`` for empty columns."""
        lines = [
            " ".join(str(row) for row in sorted(column)) if column else "-"
            for column in self._columns
        ]
        return "\n".join(lines)

    def __matmul__(self, other: SparseGF2Matrix) -> SparseGF2Matrix:
        if self.n_cols != other.n_rows:
            raise MatrixShapeError(f"Cannot multiply {self.shape} by {other.shape}.")
        product: list[set[int]] = []
        for column in other._columns:
            acc: set[int] = set()
            for j in column:
                acc ^= self._columns[j]
            product.append(acc)
        return SparseGF2Matrix(product, self.n_rows, self.row_order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseGF2Matrix):
            return NotImplemented
        return self.n_rows == other.n_rows and self._columns == other._columns

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SparseGF2Matrix(shape={self.shape}, nnz={self.nnz()})"

    def _check_column(self, j: int) -> None:
        if not 0 <= j < len(self._columns):
            raise MatrixShapeError(f"Column {j} outside 0..{len(self._columns) - 1}.")

    def _xor_into(self, src: int, dst: int) -> None:
        self._columns[dst] ^= self._columns[src]

    def _raw(self, j: int) -> set[int]:
        return self._columns[j]


@dataclass(frozen=True)
class ReductionResult:
    """Reduced matrix ``R`` with ``R = D·V`` and the pivot lookup by low row."""

    R: SparseGF2Matrix
    V: SparseGF2Matrix
    pivots: dict[int, int]

    def low(self, j: int) -> int | None:
        return low(self.R, j)

    def zero_columns(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.R.n_cols) if self.R.is_zero(j))


def low(matrix: SparseGF2Matrix, j: int) -> int | None:
    """Return the lowest row of column ``j`` under the matrix row order."""
    matrix._check_column(j)
    return matrix.row_order.low_of(matrix._raw(j))


def add_column(matrix: SparseGF2Matrix, src: int, dst: int) -> SparseGF2Matrix:
    """Add column ``src`` into column ``dst`` in place and return the matrix.

    Raises:
        MatrixShapeError: If either index is out of range or ``src == dst``.
    """
    matrix._check_column(src)
    matrix._check_column(dst)
    if src == dst:
        raise MatrixShapeError("Cannot add a column to itself.")
    matrix._xor_into(src, dst)
    return matrix


def reduce(matrix: SparseGF2Matrix) -> ReductionResult:
    """Run the standard column reduction, left to right.

    Args:
        matrix: Matrix to reduce. It is not modified.

    Returns:
        ReductionResult with ``R = D·V``, ``V`` unit upper-triangular.
    """
    R = matrix.copy()
    V = SparseGF2Matrix.identity(matrix.n_cols)
    pivots: dict[int, int] = {}
    additions = 0
    for j in range(R.n_cols):
        lowest = low(R, j)
        while lowest is not None and lowest in pivots:
            source = pivots[lowest]
            R._xor_into(source, j)
            V._xor_into(source, j)
            additions += 1
            lowest = low(R, j)
        if lowest is not None:
            pivots[lowest] = j
    logger.debug(
        "Reduced %d x %d matrix with %d column additions.",
        matrix.n_rows,
        matrix.n_cols,
        additions,
    )
    return ReductionResult(R=R, V=V, pivots=pivots)
