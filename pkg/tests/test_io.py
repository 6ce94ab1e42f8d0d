import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multilatin import ViolationKind, cyclic_simple
from multilatin.corpus import random_partial, random_square
from multilatin.equivalence import block_map, expand_to_semi_latin, to_orthogonal_array
from multilatin.errors import FormatError, InvalidSemiLatin, NotStrength2, ValidationError
from multilatin.io import (
    format_map,
    format_oa,
    format_semi_latin,
    format_square,
    parse_map,
    parse_mls,
    parse_oa,
    parse_sls,
    parse_square,
    read_file,
)

from conftest import DATA, load


def test_L4_roundtrip():
    sq = load("L4.mls")
    text = format_square(sq)
    assert text.splitlines()[:3] == ["mls 1", "4 2", "1,2|1,2|3,3|4,4"]
    assert parse_mls(text) == sq


def test_cells_sorted_on_output():
    # U4.mls lists some cells unsorted
    assert "1,5,5,5|4,4,4,6" in format_square(load("U4.mls"))


def test_dash_is_empty_cell():
    sq = parse_mls("mls 1\n2 1\n- | 1\n1|-\n")
    assert sq.cell(0, 0) == () and sq.cell(0, 1) == (1,)
    assert format_square(sq) == "mls 1\n2 1\n-|1\n1|-\n"


def test_lenient_whitespace_and_comments():
    text = "# a comment\n\nmls   1\n 2 1 \n 1 | 2  # trailing\n2|1\n"
    assert parse_mls(text) == parse_mls("mls 1\n2 1\n1|2\n2|1\n")


def test_symbol_out_of_range_is_validation_error():
    with pytest.raises(ValidationError) as exc:
        parse_mls("mls 1\n4 1\n5|1|2|3\n1|2|3|4\n2|3|4|1\n3|4|1|2\n")
    assert ViolationKind.SYMBOL_OUT_OF_RANGE in exc.value.report.kinds()


@pytest.mark.parametrize(
    "text, line",
    [
        ("", None),
        ("mls 2\n1 1\n1\n", 1),
        ("mls 1\n2\n", 2),
        ("mls 1\n2 1\n1|2\n", None),
        ("mls 1\n2 1\n1|2|1\n2|1\n", 3),
        ("mls 1\n2 1\n1|x\n2|1\n", 3),
        ("mls 1\n2 1\n1||2\n2|1\n", 3),
        ("mls 1\n2 1\n1|2\n2|1\nextra\n", 5),
        ("mls 1\n0 1\n", 2),
    ],
)
def test_syntax_errors_carry_position(text, line):
    with pytest.raises(FormatError) as exc:
        parse_mls(text)
    assert exc.value.line == line


def test_bad_cell_column():
    with pytest.raises(FormatError) as exc:
        parse_mls("mls 1\n2 1\n1|x\n2|1\n")
    assert exc.value.column == 3


def test_require_complete():
    with pytest.raises(ValidationError):
        parse_mls("mls 1\n2 1\n-|1\n1|-\n", require_complete=True)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_mls_roundtrip(n, k, seed):
    rng = np.random.default_rng(seed)
    for sq in (random_square(n, k, rng), random_partial(n, k, rng)):
        assert parse_mls(format_square(sq)) == sq


def test_semi_latin_roundtrip():
    sls = parse_sls(read_file(DATA / "semi_3x3_2.sls"))
    assert parse_sls(format_semi_latin(sls)) == sls
    other = expand_to_semi_latin(cyclic_simple(4, 2))
    assert parse_sls(format_semi_latin(other)) == other


def test_semi_latin_rejects_repeats():
    with pytest.raises(InvalidSemiLatin):
        parse_sls("sls 1\n2 1\n1|1\n2|2\n")


def test_oa_roundtrip_and_multiplicity_marker():
    sq = load("L4.mls")
    oa = to_orthogonal_array(sq)
    text = format_oa(oa)
    assert text.startswith("oa N=32 m=3 q=4 lambda=2\n")
    assert "1 3 3 ×2" in text
    assert parse_oa(text) == oa
    assert parse_oa(text.replace("×", "x")) == oa


def test_oa_errors():
    with pytest.raises(FormatError):
        parse_oa("oa N=2 m=3 q=1 lambda=1\n1 1 1\n")
    with pytest.raises(FormatError):
        parse_oa("oa N=1 m=4 q=1 lambda=1\n1 1 1\n")
    with pytest.raises(NotStrength2):
        parse_oa("oa N=4 m=3 q=2 lambda=1\n1 1 1\n1 2 2\n2 1 1\n2 2 2\n")


def test_map_roundtrip():
    f = block_map(3, 2)
    assert parse_map(format_map(f), 3) == f
    assert parse_map(read_file(DATA / "f1.map"), 3) == f


def test_parse_square_dispatch():
    assert parse_square(read_file(DATA / "U4.mls")).order == 6
    assert parse_square(read_file(DATA / "semi_3x3_2.sls")).k == 2
    assert parse_square(format_oa(to_orthogonal_array(cyclic_simple(3, 1)))).q == 3
    with pytest.raises(FormatError):
        parse_square("xyz 1\n")
