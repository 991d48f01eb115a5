"Tests for kernel persistence of the subcomplex inclusions."

from __future__ import annotations

import pytest

from cobordia import fixtures, oracle
from cobordia.complex import Block, Cell, FilteredComplex, Label
from cobordia.kernel import (
    EventKind,
    KernelPairingError,
    build_D_im,
    build_D_ker,
    kernel_pairs,
)
from cobordia.z2 import ReductionResult, SparseGF2Matrix, reduce


def test_kernel_birth_without_closing_edge() -> None:
    complex_ = fixtures.kernel_example()
    run = kernel_pairs(complex_, Block.A)
    assert len(run.pairs) == 1
    pair = run.pairs[0]
    assert pair.degree == 0
    assert pair.birth.time == 2.0
    assert pair.birth.cell == 4
    assert pair.is_infinite


def test_kernel_death_by_edge_inside_a() -> None:
    complex_ = fixtures.kernel_example(close_in_a=True)
    run = kernel_pairs(complex_, Block.A)
    assert len(run.pairs) == 1
    pair = run.pairs[0]
    assert (pair.birth.time, pair.death.time if pair.death else None) == (2.0, 3.0)
    assert pair.death is not None
    assert pair.death.kind is EventKind.DEATH
    assert run.event_at(5) is EventKind.DEATH
    assert run.event_at(4) is EventKind.BIRTH
    assert run.event_at(3) is None


def test_birth_representative_is_relative_cycle() -> None:
    complex_ = fixtures.kernel_example()
    run = kernel_pairs(complex_, Block.A)
    chain = run.representatives[4]
    assert chain == (3, 4)
    assert complex_.chain_boundary(chain) == (0, 1)


def test_d_im_rows_put_block_first() -> None:
    complex_ = fixtures.kernel_example()
    matrix = build_D_im(complex_, Block.B)
    assert matrix.row_order.sequence[0] == 2
    assert matrix.row_order.block_size == 1


def test_d_ker_keeps_zero_columns_only() -> None:
    complex_ = fixtures.kernel_example(close_in_a=True)
    run = kernel_pairs(complex_, Block.A)
    d_ker = build_D_ker(run.reduction_im)
    assert d_ker.n_cols == len(run.ker_columns)
    assert run.ker_columns == (0, 1, 2, 5)
    assert d_ker.column(3) == (3, 4, 5)


def test_tree_has_only_vertex_cycles() -> None:
    complex_ = fixtures.two_tunnel()
    run = kernel_pairs(complex_, Block.AB)
    assert all(complex_.cell_at(j).dim == 0 for j in run.ker_columns)


def test_cylinder_kernels() -> None:
    complex_ = fixtures.cylinder()
    runs = {block: kernel_pairs(complex_, block) for block in Block}
    assert [pair.degree for pair in runs[Block.A].pairs] == []
    assert sorted(pair.degree for pair in runs[Block.AB].pairs) == [0, 1]
    assert all(pair.is_infinite for pair in runs[Block.AB].pairs)
    last = len(complex_) - 1
    assert runs[Block.AB].living(1, last) == 1


@pytest.mark.parametrize("block", list(Block))
def test_living_counts_match_oracle_on_capped_cylinder(block: Block) -> None:
    complex_ = fixtures.cylinder_with_top_triangle()
    run = kernel_pairs(complex_, block)
    for step in range(len(complex_)):
        dims = oracle.kernel_dims(complex_, step, block)
        for degree in (0, 1):
            assert run.living(degree, step) == dims[degree]


@pytest.mark.parametrize("seed", range(100))
def test_living_counts_match_oracle_on_random_complexes(seed: int) -> None:
    complex_ = fixtures.random_labeled_complex(seed)
    for block in Block:
        run = kernel_pairs(complex_, block)
        for step in range(len(complex_)):
            dims = oracle.kernel_dims(complex_, step, block)
            for degree in range(max(complex_.dimension, 0)):
                assert run.living(degree, step) == dims[degree]


@pytest.mark.parametrize("seed", range(100))
def test_kernel_events_respect_the_block(seed: int) -> None:
    complex_ = fixtures.random_labeled_complex(seed)
    runs = {block: kernel_pairs(complex_, block) for block in Block}
    assert runs[Block.A].zero_columns() == runs[Block.B].zero_columns()
    assert runs[Block.A].zero_columns() == runs[Block.AB].zero_columns()
    for block, run in runs.items():
        for pair in run.pairs:
            assert not block.contains(complex_.cell(pair.birth.cell).label)
            if pair.death is not None:
                assert block.contains(complex_.cell(pair.death.cell).label)


def _doubled_edge_complex() -> FilteredComplex:
    # A = {0, 1}, B = {2}; edges 5 and 6 both join 0 and 1 inside A
    cells = [
        Cell(0, 0, (), 0.0, Label.A),
        Cell(1, 0, (), 0.0, Label.A),
        Cell(2, 0, (), 0.0, Label.B),
        Cell(3, 1, (0, 2), 1.0),
        Cell(4, 1, (1, 2), 2.0),
        Cell(5, 1, (0, 1), 3.0, Label.A),
        Cell(6, 1, (0, 1), 4.0, Label.A),
    ]
    return FilteredComplex(cells)


def test_doubled_edge_kills_the_class_once() -> None:
    run = kernel_pairs(_doubled_edge_complex(), Block.A)
    assert len(run.pairs) == 1
    pair = run.pairs[0]
    assert pair.birth.cell == 4
    assert pair.death is not None
    assert pair.death.cell == 5


def test_two_deaths_on_one_birth_are_rejected(monkeypatch: pytest.MonkeyPatch) -> None:
    seen: list[SparseGF2Matrix] = []

    def reduce_image_only(matrix: SparseGF2Matrix) -> ReductionResult:
        seen.append(matrix)
        if len(seen) == 1:
            return reduce(matrix)
        return ReductionResult(matrix.copy(), SparseGF2Matrix.identity(matrix.n_cols), {})

    monkeypatch.setattr("cobordia.kernel.reduce", reduce_image_only)
    with pytest.raises(KernelPairingError, match="repeats"):
        kernel_pairs(_doubled_edge_complex(), Block.A)
