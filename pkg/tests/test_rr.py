from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from cdvcalc.quotient import Basket
from cdvcalc.rr import (
    B_term,
    ClassificationError,
    RRError,
    TYPE_O_BASKETS,
    chi_Q,
    classify_type,
    context_from_basket,
    contraction_data,
    e3_from_pins,
    matches_type_o_list,
    solve_c2,
)


def test_type_i_data():
    J = Basket.of((3, 1), (5, 2))
    assert e3_from_pins(2, J) == Fraction(1, 15)
    data = contraction_data(2, Fraction(1, 15), J)
    assert (data.d_minus_1, data.type_tag) == (0, "I")


def test_type_o_data():
    data = contraction_data(1, Fraction(1, 2), Basket.of((2, 1), (2, 1), (2, 1)))
    assert data.type_tag == "O"


def test_index_four_refinement():
    J = Basket.of((2, 1), (4, 1))
    assert contraction_data(3, Fraction(1, 4), J).type_tag == "IIb"
    assert contraction_data(3, Fraction(1, 4), J, 1).type_tag == "IIb∨"
    assert contraction_data(3, Fraction(1, 4), J, 2).type_tag == "IIb∨∨"


def test_pins_hold_on_context():
    ctx = context_from_basket(2, Fraction(1, 15), Basket.of((3, 1), (5, 2)))
    assert chi_Q(0, ctx) == 1
    assert chi_Q(1, ctx) == 0


def test_inconsistent_data_is_rejected():
    with pytest.raises(RRError):
        context_from_basket(2, Fraction(1, 7), Basket.of((3, 1), (5, 2)))
    with pytest.raises(RRError):
        context_from_basket(3, Fraction(1, 3), Basket.of((3, 1),))


def test_classification_failures_are_named():
    with pytest.raises(ClassificationError) as info:
        classify_type(2, Fraction(1, 2), Basket.of((3, 1),), 0)
    assert "r*E^3" in str(info.value)


def test_type_o_list():
    assert matches_type_o_list(Basket.of((2, 1), (2, 1), (9, 1)))
    assert matches_type_o_list(Basket())
    assert not matches_type_o_list(Basket.of((9, 4)))
    assert ((7, 3),) in TYPE_O_BASKETS


pairs = st.integers(2, 9).flatmap(
    lambda r: st.tuples(st.just(r), st.sampled_from([v for v in range(1, r // 2 + 1) if gcd(v, r) == 1])))


@given(st.lists(pairs, min_size=0, max_size=3), st.integers(1, 6), st.integers(0, 20))
def test_difference_identity(entries, a, i):
    J = Basket(tuple(entries))
    if any(gcd(a, r) != 1 for r in J.indices):
        return
    try:
        E3 = e3_from_pins(a, J)
        ctx = context_from_basket(a, E3, J)
    except RRError:
        return
    assert chi_Q(0, ctx) == 1 and chi_Q(1, ctx) == 0
    lhs = chi_Q(-i, ctx) - chi_Q(i + 1, ctx)
    rhs = (i + Fraction(1, 2)) * a * E3 + B_term(i + 1, J) - B_term(i, J)
    assert lhs == rhs


def test_solve_c2_round_trip():
    c2 = solve_c2(2, Fraction(1, 15), [(3, 2), (5, 4)])
    assert c2 == context_from_basket(2, Fraction(1, 15), Basket.of((3, 1), (5, 2))).E_dot_c2


def test_b_term_is_symmetric():
    J = Basket.of((5, 2), (7, 3))
    for i in range(-10, 10):
        assert B_term(i, J) == B_term(-i, J)
