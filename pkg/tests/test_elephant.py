from fractions import Fraction

import pytest

from cdvcalc.corpus import expected_fundamental_cycle
from cdvcalc.duval import DuValType
from cdvcalc.elephant import (
    DualGraph,
    PartialResolution,
    elephant_value,
    enumerate_typeI_candidates,
    enumerate_typeII_III_candidates,
    identify_ade,
    surviving_pairs,
)
from cdvcalc.quotient import Basket

ALL_TYPES = ["A1", "A2", "A5", "D4", "D5", "D8", "E6", "E7", "E8"]


@pytest.mark.parametrize("name", ALL_TYPES)
def test_fundamental_cycle(name):
    t = DuValType.parse(name)
    g = DualGraph.of(t)
    z = g.fundamental_cycle()
    assert z == expected_fundamental_cycle(t)
    assert g.dot(z, z) == -2
    assert all(b >= 0 for b in g.bullets())


@pytest.mark.parametrize("name", ALL_TYPES)
def test_whole_graph_is_identified(name):
    g = DualGraph.of(DuValType.parse(name))
    assert identify_ade(g, range(g.n)) == DuValType.parse(name)


def test_subgraph_types():
    g = DualGraph.of(DuValType.parse("E8"))
    assert identify_ade(g, {0, 1, 2}) == DuValType.parse("A3")
    assert identify_ade(g, {2, 3, 4, 5, 7}) == DuValType.parse("D5")
    assert g.longest_path(range(8)) == 7


def test_pullback_of_kept_curve():
    g = DualGraph.of(DuValType.parse("A6"))
    p = PartialResolution(g, (2,))
    # F3 on the contraction of the A2 and A3 chains either side
    assert p.dot(g.unit(2), g.unit(2)) == Fraction(-2) + Fraction(2, 3) + Fraction(3, 4)


def test_nothing_contracted_is_the_minimal_resolution():
    g = DualGraph.of(DuValType.parse("D4"))
    p = PartialResolution(g, tuple(range(4)))
    for i in range(4):
        assert p.dot(g.unit(i), g.unit(i)) == -2
    assert p.star_types() == []


def test_elephant_value_is_rational():
    g = DualGraph.of(DuValType.parse("E7"))
    p = PartialResolution(g, (3,))
    bE = [0] * 7
    bE[3] = 2
    assert isinstance(elephant_value(p, bE), Fraction)


def test_type_i_conclusions():
    res = enumerate_typeI_candidates(Basket.of((7, 3),))
    assert res.target == Fraction(8, 7)
    assert res.conclusion() == ["cE7"]
    res = enumerate_typeI_candidates(Basket.of((3, 1), (5, 2)))
    assert res.target == Fraction(8, 15)
    assert res.conclusion() == ["cE7", "cE8"]


def test_index_four_pairs():
    res = enumerate_typeII_III_candidates("IIb∨", Basket.of((2, 1), (4, 1)), a=3)
    assert res.target == Fraction(3, 4)
    assert surviving_pairs(res) == [("E6", ("D5",))]


def test_type_iii_pairs():
    res = enumerate_typeII_III_candidates("III", Basket.of((3, 1),), a=2)
    assert ("A3", ("A2",)) in surviving_pairs(res)


def test_rows_serialise():
    res = enumerate_typeI_candidates(Basket.of((7, 3),), max_rank=8)
    data = res.to_json()
    assert data["conclusion"] == ["cE7"]
    assert all(set(row) >= {"S_X", "bE_S", "value", "survives"} for row in data["rows"])
