import random

import pytest
from hypothesis import given, strategies as st

from cdvcalc.corpus import ade_catalog, normal_form, random_linear_change, random_perturbation
from cdvcalc.duval import (
    CdvType,
    DuValType,
    NonIsolatedError,
    NotDuVal,
    Undecided,
    classify_cdv,
    classify_duval,
    split_residual,
)
from cdvcalc.poly import parse

V3 = ["x", "y", "z"]
V4 = ["x", "y", "z", "u"]


@pytest.mark.parametrize("text, expected", [
    ("x+y^2", "A0"),
    ("x^2+y^2+z^2", "A1"),
    ("x*y+z^4", "A3"),
    ("x^2+y^2+z^7", "A6"),
    ("x^2+y^2*z+z^3", "D4"),
    ("x^2+y^2*z+z^5", "D6"),
    ("x^2+y^3+z^4", "E6"),
    ("x^2+y^3+y*z^3", "E7"),
    ("x^2+y^3+z^5", "E8"),
    ("x^2+y^2+z^2+x*y*z", "A1"),
])
def test_normal_forms(text, expected):
    assert classify_duval(parse(text, V3)) == DuValType.parse(expected)


@pytest.mark.parametrize("text, expected", [
    # cross terms that make naive square completion go wrong
    ("x^2+2*x*z^2+y^2+z^5", "A3"),
    ("x^2+2*x*y*z+y^3+z^5", "E8"),
    ("x^2+y^2*z+z^2*y+z^4", "D4"),
])
def test_cross_terms(text, expected):
    assert classify_duval(parse(text, V3)) == DuValType.parse(expected)


@pytest.mark.parametrize("text", ["x^2+y^3", "x*y*z", "x^3+y^3+z^3", "x^2+y^3+z^6", "x^2+y^4+z^4"])
def test_not_du_val(text):
    assert isinstance(classify_duval(parse(text, V3)), NotDuVal)


def test_non_isolated_is_undecided():
    res = classify_duval(parse("x^2+y^2", V3), 6)
    assert isinstance(res, Undecided)
    assert not res


def test_type_ordering_and_parsing():
    types = [DuValType.parse(t) for t in ["E6", "A3", "D5", "A1", "D4"]]
    assert [str(t) for t in sorted(types)] == ["A1", "A3", "D4", "D5", "E6"]
    with pytest.raises(ValueError):
        DuValType.parse("D3")
    with pytest.raises(ValueError):
        DuValType.parse("E9")


def test_split_residual_keeps_the_transversal_part():
    f = parse("x^2+2*x*z^2+y^2+z^5", V3)
    r = split_residual(f, [0, 1], [2, 2], 6)
    # x = -z^2 at the critical point leaves -z^4 + z^5
    assert r == parse("-z^4+z^5", V3)


@given(st.sampled_from(ade_catalog(8, 8)), st.integers(0, 10 ** 6))
def test_invariant_under_linear_changes(dtype, seed):
    rng = random.Random(seed)
    assert classify_duval(random_linear_change(rng, normal_form(dtype))) == dtype


@given(st.sampled_from(ade_catalog(6, 6)), st.integers(0, 10 ** 6))
def test_stable_under_high_order_perturbation(dtype, seed):
    rng = random.Random(seed)
    f = normal_form(dtype)
    degree = (dtype.index + 2) if dtype.family == "A" else 7
    assert classify_duval(f + random_perturbation(rng, f.variables, degree)) == dtype


def test_cdv_hyperplane_minimum():
    res = classify_cdv(parse("x^2+y^2+z^3+u^3", V4), seed=0)
    assert isinstance(res, CdvType)
    assert str(res) == "cA2"


def test_cdv_square_suspension_is_cA():
    # a generic section mixes u^2 into the quadratic part
    res = classify_cdv(parse("x^2+y^3+z^5+u^2", V4), seed=3)
    assert str(res) == "cA2"


def test_cdv_e8():
    assert str(classify_cdv(parse("x^2+y^3+z^5+u^7", V4))) == "cE8"


def test_cdv_is_seed_deterministic():
    f = parse("x^2+y^2*z+z^4+u^5", V4)
    assert classify_cdv(f, seed=7).to_json() == classify_cdv(f, seed=7).to_json()


def test_cdv_reports_non_isolated():
    with pytest.raises(NonIsolatedError):
        classify_cdv(parse("x^2+y^2", V4))


def test_cdv_rejects_non_cdv():
    assert not classify_cdv(parse("x^3+y^3+z^3+u^3", V4)).is_cdv
