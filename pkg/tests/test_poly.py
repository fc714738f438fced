from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cdvcalc.poly import (
    INFINITY,
    ParseError,
    Polynomial,
    format_polynomial,
    hessian_matrix,
    is_infinite,
    jet,
    matrix_rank,
    parse,
    substitute,
    weighted_order,
    weighted_part,
)

VARS = ("x", "y", "z")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exponents = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exponents, coeffs, max_size=5).map(lambda t: Polynomial(VARS, t))
points = st.tuples(*[st.fractions(min_value=-3, max_value=3, max_denominator=3)] * 3)


def test_parse_and_format_round_trip():
    f = parse("x^2*y - 3/2*y^3 + z", VARS)
    assert format_polynomial(f) == "x^2*y-3/2*y^3+z"
    assert parse(format_polynomial(f), VARS) == f


def test_parse_infers_variables_in_natural_order():
    assert parse("x10 + x2*x1").variables == ("x1", "x2", "x10")


def test_parse_accepts_both_power_operators():
    assert parse("(x+y)**2", ["x", "y"]) == parse("x^2+2*x*y+y^2", ["x", "y"])


@pytest.mark.parametrize("text", ["x^2+", "x^-1", "(x+y", "x^y", "2/0"])
def test_parse_rejects_malformed_input(text):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse(text, VARS)


def test_weighted_order_and_part():
    f = parse("x^2 + y^3 + x*y*z + z^7", VARS)
    w = (3, 2, 1)
    assert weighted_order(f, w) == 6
    assert weighted_part(f, w, 6) == parse("x^2+y^3+x*y*z", VARS)
    assert jet(f, w, 6) == parse("x^2+y^3+x*y*z", VARS)


def test_weighted_order_of_zero_is_infinite():
    assert is_infinite(weighted_order(Polynomial.zero(VARS), (1, 1, 1)))
    assert INFINITY > 10 ** 9


def test_hessian_diagonal_is_twice_the_square_coefficient():
    H = hessian_matrix(parse("x^2 + 3*x*y", ["x", "y"]))
    assert H == [[2, 3], [3, 0]]
    assert matrix_rank(H) == 2


def test_substitute_composes():
    x, y = Polynomial.gens(["x", "y"])
    g = substitute(parse("x^2+y", ["x", "y"]), {"x": x + y, "y": y})
    assert g == parse("x^2+2*x*y+y^2+y", ["x", "y"])


def test_substitute_requires_every_variable():
    x, y = Polynomial.gens(["x", "y"])
    with pytest.raises(KeyError):
        substitute(parse("x+y", ["x", "y"]), {"x": y})


@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == Polynomial.zero(VARS)


@given(polys, polys, points)
def test_evaluation_is_a_ring_map(f, g, p):
    assert (f * g).evaluate(p) == f.evaluate(p) * g.evaluate(p)
    assert (f + g).evaluate(p) == f.evaluate(p) + g.evaluate(p)


@given(polys, polys)
def test_leibniz_rule(f, g):
    assert (f * g).derivative("y") == f.derivative("y") * g + f * g.derivative("y")


@given(polys, polys, st.tuples(*[st.integers(1, 4)] * 3))
def test_weighted_order_is_additive(f, g, w):
    if f.is_zero() or g.is_zero():
        return
    assert weighted_order(f * g, w) == weighted_order(f, w) + weighted_order(g, w)


@given(polys)
def test_format_parse_round_trip(f):
    assert parse(format_polynomial(f), VARS) == f


@given(polys, st.tuples(*[st.integers(1, 3)] * 3), st.integers(0, 8))
def test_truncated_substitution_matches_jet(f, w, bound):
    x, y, z = Polynomial.gens(VARS)
    mapping = {"x": x + y * y, "y": y + z, "z": z + x * z}
    full = jet(substitute(f, mapping), w, bound)
    assert substitute(f, mapping, truncate=(w, bound)) == full


def test_fraction_coefficients_are_exact():
    f = parse("1/3*x + 2/3*x", ["x"])
    assert f.coefficient((1,)) == Fraction(1)
