import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DEG4, INOUT
from svpattern.errors import EmptyInput, HeaderMismatch, InvalidCharacter, RaggedRows
from svpattern.pattern import (
    Pattern,
    PatternPermutation,
    apply_permutation,
    direct_sum,
    is_superpattern,
    parse_pattern,
    pattern_of,
    render_pattern,
)
from svpattern.witness import inout_witness


@st.composite
def patterns(draw, max_side=5):
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, max_side))
    bits = draw(st.lists(st.booleans(), min_size=m * n, max_size=m * n))
    return Pattern(np.array(bits).reshape(m, n))


@st.composite
def pattern_and_perm(draw):
    P = draw(patterns())
    rows = draw(st.permutations(range(P.m)))
    cols = draw(st.permutations(range(P.n)))
    return P, PatternPermutation(tuple(rows), tuple(cols))


def test_parse_identity():
    assert parse_pattern("10\n01") == Pattern.identity(2)


def test_parse_deg4_text():
    assert parse_pattern("1111\n0100\n0010\n0001") == DEG4


def test_parse_ragged_reports_row():
    with pytest.raises(RaggedRows) as exc:
        parse_pattern("10\n0")
    assert exc.value.row_index == 1


def test_parse_errors():
    with pytest.raises(EmptyInput):
        parse_pattern("\n# only a comment\n")
    with pytest.raises(InvalidCharacter):
        parse_pattern("1x\n01")
    with pytest.raises(HeaderMismatch):
        parse_pattern("3 3\n10\n01")


def test_parse_header_comments_and_spaces():
    text = "# paw\n4 4\n1 1 0 0\n0 1 0 0\n\n0 1 1 1\n0 0 0 1\n"
    assert parse_pattern(text) == Pattern.from_rows(["1100", "0100", "0111", "0001"])


def test_two_token_01_row_is_not_a_header():
    assert parse_pattern("1 0\n0 1") == Pattern.identity(2)


@given(patterns())
def test_render_round_trip(P):
    assert parse_pattern(render_pattern(P)) == P
    assert parse_pattern(render_pattern(P, header=True)) == P


def test_pattern_of_examples():
    assert pattern_of(np.eye(2)) == Pattern.identity(2)
    assert pattern_of(inout_witness().matrix) == INOUT
    assert pattern_of(np.full((2, 3), 1e-14), 1e-12) == Pattern.zeros(2, 3)


def test_direct_sum_examples():
    one = Pattern.ones(1, 1)
    assert direct_sum(one, one) == parse_pattern("10\n01")
    assert direct_sum(one, Pattern.ones(1, 2)) == parse_pattern("100\n011")
    S = direct_sum(DEG4, one)
    assert S.shape == (5, 5)
    assert S[4, 4] and S.cells[4, :4].sum() == 0 and S.cells[:4, 4].sum() == 0


def test_superpattern_examples():
    I2, J2 = Pattern.identity(2), Pattern.ones(2, 2)
    assert is_superpattern(DEG4, DEG4)
    assert is_superpattern(J2, I2)
    assert not is_superpattern(I2, J2)


def test_permutation_examples():
    P = parse_pattern("10\n01")
    assert apply_permutation(P, PatternPermutation.identity(2, 2)) == P
    assert apply_permutation(P, PatternPermutation((1, 0), (0, 1))) == parse_pattern("01\n10")


@given(pattern_and_perm())
def test_permutation_inverse(data):
    P, pi = data
    assert apply_permutation(apply_permutation(P, pi), pi.inverse()) == P


@given(pattern_and_perm(), st.data())
def test_permutation_compose(data, extra):
    P, pi = data
    rho = PatternPermutation(
        tuple(extra.draw(st.permutations(range(P.m)))), tuple(extra.draw(st.permutations(range(P.n))))
    )
    once = apply_permutation(P, pi.compose(rho))
    twice = apply_permutation(apply_permutation(P, pi), rho)
    assert once == twice


def test_bad_permutation_rejected():
    with pytest.raises(ValueError):
        PatternPermutation((0, 0), (0, 1))


def test_pattern_is_immutable_and_hashable():
    P = Pattern.identity(3)
    with pytest.raises(ValueError):
        P.cells[0, 1] = True
    assert len({P, Pattern.identity(3), Pattern.ones(3, 3)}) == 2
