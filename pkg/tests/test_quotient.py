from math import gcd

import pytest
from hypothesis import given, strategies as st

from cdvcalc.poly import parse
from cdvcalc.quotient import (
    Basket,
    CAQuotientPoint,
    IndexFourPoint,
    NotTerminal,
    QuotientPoint,
    QuotientType,
    Unrecognized,
    b_candidates,
    basket_of_normal_form,
    normalize_quotient,
    recognize_normal_form,
    v_from_b,
)

indices = st.integers(2, 30)


def test_type_equality_up_to_units_and_order():
    assert QuotientType(5, (1, 4, 2)) == QuotientType(5, (2, 3, 4))
    assert QuotientType(5, (1, 4, 2)) != QuotientType(5, (1, 4, 1))
    assert len({QuotientType(7, (1, 6, 3)), QuotientType(7, (3, 4, 2))}) == 1


def test_normalize_terminal_and_not():
    assert normalize_quotient(5, (1, 4, 2)) == QuotientType(5, (1, 4, 2))
    assert isinstance(normalize_quotient(4, (1, 1, 1)), NotTerminal)


@given(indices, st.data())
def test_terminal_lemma_round_trip(r, data):
    b = data.draw(st.sampled_from([k for k in range(1, r) if gcd(k, r) == 1]))
    u = data.draw(st.sampled_from([k for k in range(1, r) if gcd(k, r) == 1]))
    q = normalize_quotient(r, (u, -u, u * b))
    assert isinstance(q, QuotientType)
    assert q == QuotientType(r, (1, r - 1, b))


@given(indices, st.data())
def test_v_from_b_inverts_b_candidates(r, data):
    a = data.draw(st.sampled_from([k for k in range(1, 3 * r) if gcd(k, r) == 1]))
    b = data.draw(st.sampled_from([k for k in range(1, r) if gcd(k, r) == 1]))
    v = v_from_b(r, b, a)
    assert 1 <= v <= r // 2
    assert b in b_candidates(r, v, a)
    for other in b_candidates(r, v, a):
        assert v_from_b(r, other, a) == v


def test_v_from_b_values():
    assert v_from_b(5, 2, 2) == 1
    assert v_from_b(7, 3, 2) == 2


def test_basket_is_sorted_and_validated():
    assert Basket.of((5, 2), (3, 1)).entries == ((3, 1), (5, 2))
    assert Basket.from_json([[5, 2], [3, 1]]) == Basket.of((3, 1), (5, 2))
    assert Basket.of((4, 1), (6, 1)).index_lcm() == 12
    with pytest.raises(ValueError):
        Basket.of((4, 2))
    with pytest.raises(ValueError):
        Basket.of((1, 1))


def test_baskets_of_normal_forms():
    assert basket_of_normal_form(QuotientPoint(QuotientType(5, (1, 4, 2))), 2) == Basket.of((5, 1))
    assert basket_of_normal_form(CAQuotientPoint(3, 1, 2), 2) == Basket.of((3, 1), (3, 1))
    assert basket_of_normal_form(IndexFourPoint(3), 3) == Basket.of((2, 1), (4, 1))
    assert isinstance(basket_of_normal_form(IndexFourPoint(5), 3), Unrecognized)


def test_recognize_smooth_cover_point():
    # linear in y4: the point is a quotient of smooth space
    phi = parse("y1*y2 + y4", ["y1", "y2", "y3", "y4"])
    form = recognize_normal_form(phi, 5, (1, 4, 2, 0), 0)
    assert isinstance(form, (QuotientPoint, CAQuotientPoint))


def test_recognize_returns_none_for_gorenstein_or_off_hypersurface():
    phi = parse("y1*y2 + y3^2 + 1", ["y1", "y2", "y3", "y4"])
    assert recognize_normal_form(phi, 3, (1, 2, 1, 0), 0) is None
    assert recognize_normal_form(phi - 1, 1, (0, 0, 0, 0), 0) is None
