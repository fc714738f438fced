import random
from fractions import Fraction

import pytest

from cdvcalc.blowup import (
    CAN_CONDITIONS,
    FAIL,
    PASS,
    BlowupError,
    WeightedGerm,
    blowup_report,
    chart,
    check_cAn_weights,
    check_genmethod,
    discrepancy,
    enumerate_cAn_weights,
    exceptional_cubed,
    nongorenstein_points,
)
from cdvcalc.corpus import CORPUS, can_oracle, corpus_entry, random_can_case
from cdvcalc.poly import parse
from cdvcalc.quotient import Basket, Unrecognized

V4 = ["x1", "x2", "x3", "x4"]


def germ(text, weights):
    return WeightedGerm(parse(text, V4), weights)


def test_invariants_of_type_i_germ():
    g = corpus_entry("type-I-cE8").germ()
    assert g.order() == 14
    assert discrepancy(g) == 2
    assert exceptional_cubed(g) == Fraction(1, 15)


def test_chart_strict_transform_and_action():
    g = corpus_entry("IIb-index-four-cD4").germ()
    ch = chart(g, 3)
    assert ch.order == 4
    assert ch.action == (1, 3, 1, 2)
    # the strict transform is not divisible by the exceptional coordinate
    assert ch.strict_transform.constant_term() != 0 or any(e[2] == 0 for e in ch.strict_transform.terms)


@pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.name)
def test_corpus_hypotheses_hold(entry):
    verdicts = check_genmethod(entry.germ())
    assert set(verdicts) == {"1", "2", "3", "4"}
    assert all(v.status == PASS for v in verdicts.values())


@pytest.mark.parametrize("entry", [e for e in CORPUS if not e.name.startswith("IIb-family")], ids=lambda e: e.name)
def test_corpus_invariants(entry):
    rep = blowup_report(entry.germ())
    assert rep.c == entry.c
    assert rep.E_cubed == entry.E_cubed
    assert rep.basket == Basket(entry.basket)


@pytest.mark.parametrize("r", [3, 5, 7])
def test_iib_family_computed_invariants(r):
    # the exact computation gives 1/r for this family, see the decisions ledger
    rep = blowup_report(corpus_entry(f"IIb-family-r{r}").germ())
    assert rep.c == 2
    assert rep.E_cubed == Fraction(1, r)
    assert rep.basket == Basket.of((r, 1), (r, 1))


def test_monomial_leading_form_fails_boundary_condition():
    verdicts = check_genmethod(germ("x1^2 + x2^3 + x3^3 + x4^3", (1, 1, 1, 1)))
    assert verdicts["4"].status == FAIL
    assert verdicts["1"].status == FAIL


def test_point_scan_locates_the_index_four_point():
    scan = nongorenstein_points(corpus_entry("IIb-index-four-chart-one").germ())
    assert scan.basket == Basket.of((2, 1), (4, 1))
    assert any("chart 1" in p.location for p in scan.points)


def test_unrecognised_points_are_values():
    rep = blowup_report(germ("x1*x4 + x2^3 + x3^3 + x4^2", (2, 1, 1, 1)))
    assert isinstance(rep.basket, Unrecognized)
    assert rep.strata
    assert "unrecognized" in rep.to_json()["basket"]


@pytest.mark.parametrize("text, weights", [
    ("x1 + x2", (1, 1)),
    ("x1^2 + x2^2 + x3^2 + x4^2", (2, 2, 2, 2)),
    ("x1^2 + x2^2 + x3^2 + x4^2 + 1", (1, 1, 1, 1)),
    ("x1^2", (1, 0, 1, 1)),
])
def test_invalid_germs(text, weights):
    with pytest.raises(BlowupError):
        WeightedGerm(parse(text, V4[:len(weights)]), weights)


def test_report_json_is_serialisable():
    import json
    rep = blowup_report(corpus_entry("type-I-cE7").germ())
    data = json.loads(json.dumps(rep.to_json(), sort_keys=True))
    assert data["E3"] == "1/15"
    assert data["basket"] == [[3, 1], [5, 2]]


def test_can_check_names_violations():
    g = parse("x3^4 + x4^4", ["x3", "x4"])
    assert check_cAn_weights(g, 1, 3, 1).admissible
    verdict = check_cAn_weights(g, 1, 3, 2)
    assert not verdict
    assert set(verdict.violations) <= set(CAN_CONDITIONS)


def test_can_enumeration_agrees_with_oracle():
    g = parse("x3^4 + x4^4", ["x3", "x4"])
    triples = enumerate_cAn_weights(g, 5)
    assert triples == [(1, 3, 1), (2, 2, 1)]
    for r2 in range(1, 6):
        for r1 in range(1, r2 + 1):
            for a in range(1, r1 + r2 + 1):
                assert ((r1, r2, a) in triples) == (not can_oracle(g, r1, r2, a))


def test_can_random_cases_match_oracle():
    rng = random.Random(11)
    for _ in range(100):
        g, r1, r2, a = random_can_case(rng)
        assert set(check_cAn_weights(g, r1, r2, a).violations) == set(can_oracle(g, r1, r2, a))
