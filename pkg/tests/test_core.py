import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multilatin import (
    MultiLatinSquare,
    ViolationKind,
    complement_simple,
    cyclic_latin,
    cyclic_simple,
    inflate,
    is_simple,
    join,
    remove,
    validate,
)
from multilatin.core import validate_cells
from multilatin.corpus import random_square
from multilatin.errors import (
    InvalidInput,
    NotASubset,
    NotSimple,
    OrderMismatch,
    UnsupportedParameters,
    ValidationError,
)

from conftest import load


def test_L4_is_valid_and_not_simple():
    sq = load("L4.mls")
    assert validate(sq, require_complete=True).valid
    assert sq.cell(0, 2) == (3, 3)
    assert not is_simple(sq)


def test_empty_square_partial_but_not_complete():
    sq = MultiLatinSquare.empty(3, 2)
    assert validate(sq).valid
    report = validate(sq, require_complete=True)
    assert not report.valid
    assert report.kinds() == {ViolationKind.CELL_UNDERFULL}
    assert len(report.violations) == 9


def test_overfull_cell_reported():
    rows = [[(1, 1, 1), (), ()], [(), (), ()], [(), (), ()]]
    report = validate_cells(rows, 2)
    kinds = {(v.kind, v.row, v.col) for v in report.violations}
    assert (ViolationKind.CELL_OVERFULL, 0, 0) in kinds
    # three 1s also overflow row 0 and column 0
    assert report.kinds() == {ViolationKind.CELL_OVERFULL, ViolationKind.ROW_EXCESS, ViolationKind.COL_EXCESS}


def test_symbol_out_of_range():
    rows = [[(5,), (1,)], [(1,), (2,)]]
    report = validate_cells(rows, 1)
    assert report.kinds() == {ViolationKind.SYMBOL_OUT_OF_RANGE}
    with pytest.raises(ValidationError):
        MultiLatinSquare.from_cells(rows, 1)


def test_all_violations_reported_not_just_first():
    rows = [[(1, 1), (1, 1)], [(1, 1), (2, 2)]]
    report = validate_cells(rows, 2)
    assert len([v for v in report.violations if v.kind == ViolationKind.ROW_EXCESS]) == 1
    assert len([v for v in report.violations if v.kind == ViolationKind.COL_EXCESS]) == 1
    assert "RowExcess" in report.summary()


def test_constructor_infers_index():
    assert MultiLatinSquare(cyclic_simple(4, 3).counts).index == 3
    with pytest.raises(InvalidInput):
        MultiLatinSquare(np.zeros((2, 2, 3)))
    with pytest.raises(InvalidInput):
        MultiLatinSquare([[[1, 0], [0, 0]], [[0, 0], [0, 0]]])


def test_counts_are_read_only():
    sq = cyclic_latin(3)
    with pytest.raises(ValueError):
        sq.counts[0, 0, 0] = 5


def test_inflate():
    assert inflate([[1]], 3).cell(0, 0) == (1, 1, 1)
    base = cyclic_latin(3)
    sq = inflate(base, 2)
    assert sq.cell(0, 0) == (2, 2) and base.cell(0, 0) == (2,)
    assert validate(sq, require_complete=True).valid
    assert not is_simple(sq)
    with pytest.raises(InvalidInput):
        inflate([[1, 1], [2, 2]], 2)
    with pytest.raises(InvalidInput):
        inflate(cyclic_simple(3, 2), 2)


def test_cyclic_simple_examples():
    assert cyclic_simple(3, 2).cell(0, 0) == (2, 3)
    assert all(c == (1, 2, 3) for row in cyclic_simple(3, 3).cells() for c in row)
    with pytest.raises(UnsupportedParameters):
        cyclic_simple(2, 3)


@pytest.mark.parametrize("n", range(1, 9))
def test_cyclic_simple_sweep(n):
    for k in range(1, n + 1):
        sq = cyclic_simple(n, k)
        assert validate(sq, require_complete=True).valid
        assert is_simple(sq)
        # every symbol exactly k times per row and per column
        assert (sq.counts.sum(axis=1) == k).all() and (sq.counts.sum(axis=0) == k).all()
        if k < n:
            assert complement_simple(complement_simple(sq)) == sq


def test_join_L3_with_itself():
    half = load("L3.mls")
    assert join(half, half) == load("L3_doubled.mls")


def test_join_identity_and_commutativity():
    a, b = cyclic_simple(4, 1), cyclic_simple(4, 3)
    assert join(a, MultiLatinSquare.empty(4, 0)) == a
    assert join(a, b) == join(b, a)
    with pytest.raises(OrderMismatch):
        join(a, cyclic_latin(3))


def test_remove_examples():
    half = load("L3.mls")
    assert remove(load("L3_doubled.mls"), half) == half
    with pytest.raises(NotASubset) as exc:
        remove(inflate(cyclic_latin(3), 2), inflate([[2, 3, 1], [1, 2, 3], [3, 1, 2]], 1))
    assert exc.value.cell == (1, 0)


def test_complement_examples():
    c = complement_simple(cyclic_simple(3, 2))
    assert c.index == 1 and c.cell(0, 0) == (1,)
    with pytest.raises(NotSimple):
        complement_simple(inflate(cyclic_latin(3), 2))
    with pytest.raises(UnsupportedParameters):
        complement_simple(cyclic_simple(3, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_join_remove_roundtrip(n, k1, k2, seed):
    rng = np.random.default_rng(seed)
    a, b = random_square(n, k1, rng), random_square(n, k2, rng)
    ab = join(a, b)
    assert validate(ab, require_complete=True).valid
    assert ab.index == k1 + k2
    assert remove(ab, a) == b


def test_transpose_and_hash():
    sq = load("L4.mls")
    assert sq.transpose().transpose() == sq
    assert hash(sq) == hash(load("L4.mls"))
    assert len({sq, sq.transpose()}) == 2
