from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ballquot.bmy import INF, WeightAssignment, c2_orb
from ballquot.cli import quotient_report
from ballquot.errors import InputError
from ballquot.quotient import (
    ActionOnArrangement,
    WeightMismatch,
    dm_identify,
    euler_multiplicativity_check,
    quotient_weights,
)

from conftest import entry


def _locus_weights(eid, action):
    return Counter(str(w) for _, w in quotient_report(entry(eid), action)["plan"].locus())


def test_wiman_quotient_all_weight_five():
    assert _locus_weights("wiman-g2", "g25") == Counter({"5": 10})


def test_eisenstein_quotient_weights():
    assert _locus_weights("hirzebruch-eisenstein", "f72") == Counter({"9": 1, "18": 1, "3": 1})
    assert _locus_weights("hirzebruch-cusped", "f72") == Counter({"inf": 1, "6": 1, "3": 1})


def test_gaussian_quotient_weights():
    assert _locus_weights("gaussian", "f16") == Counter({"4": 6, "8": 4})
    assert _locus_weights("gaussian-weight3-variant", "f16") == Counter({"3": 1, "4": 4, "6": 3, "12": 2})


@pytest.mark.parametrize(
    "eid,action,cover,quot",
    [
        ("wiman-g2", "g25", "15", "3/5"),
        ("gaussian", "f16", "9", "9/16"),
        ("gaussian-weight3-variant", "f16", "26/3", "13/24"),
        ("hirzebruch-eisenstein", "f72", "13/9", "13/648"),
        ("hirzebruch-cusped", "f72", "1", "1/72"),
    ],
)
def test_multiplicativity(eid, action, cover, quot):
    res = quotient_report(entry(eid), action)
    rep = res["report"]
    assert rep.cover_e_orb == Fraction(cover)
    assert rep.quotient_e_orb == Fraction(quot)
    assert rep.holds
    assert not res["image_mismatches"]
    assert len(res["dm"]) == 1


def test_multiplicativity_failure_line():
    rep = euler_multiplicativity_check(Fraction(15), 25, declared_e_orb=Fraction(1, 2))
    assert not rep.holds and "!=" in rep.line()
    with pytest.raises(InputError):
        euler_multiplicativity_check(Fraction(1), 2)


def _trivial(names):
    return ActionOnArrangement(1, tuple(names), {}, {})


@given(st.dictionaries(st.sampled_from([f"D{j}" for j in range(5)] + ["E0", "E1", "E2"]),
                       st.sampled_from([2, 3, 5, 7, INF])))
def test_trivial_action_is_idempotent(weights):
    e = entry("wiman-g2")
    arr = e.arrangement
    w = WeightAssignment.by_name(arr, weights)
    if any(arr.meet(arr.index(a), arr.index(b)) for a in weights for b in weights if a != b) and \
            sum(1 for v in weights.values() if v is INF) > 1:
        return  # two meeting cusps have no local rule
    plan = quotient_weights(weights, _trivial(arr.names), c2_orb(arr, w))
    assert plan.e_orb == c2_orb(arr, w)
    for orbit, q in zip(plan.orbits, plan.weights):
        assert len(orbit) == 1
        assert q == weights.get(orbit[0], 1)


@given(st.permutations(["first", "second"]))
def test_generator_order_invariance(order):
    e = entry("gaussian")
    act = e.action("f16")
    weights = e.raw_weights("compact")
    a = quotient_weights(weights, act, generator_order=order)
    b = quotient_weights(weights, act, generator_order=["first", "second"])
    assert sorted(zip(a.orbits, map(str, a.weights))) == sorted(zip(b.orbits, map(str, b.weights)))


def test_mixed_weights_in_orbit():
    e = entry("wiman-g2")
    weights = dict(e.raw_weights("compact"), D3=4)
    with pytest.raises(WeightMismatch, match="D0"):
        quotient_weights(weights, e.action("g25"))


def test_inconsistent_branch_orders():
    act = ActionOnArrangement(2, ("A", "B"), {"s": {"A": "B", "B": "A"}}, {"A": 2})
    with pytest.raises(WeightMismatch):
        quotient_weights({"A": 3, "B": 3}, act)


def test_action_validation():
    with pytest.raises(InputError):
        ActionOnArrangement(2, ("A", "B"), {"s": {"A": "B"}}, {})
    with pytest.raises(InputError):
        ActionOnArrangement(4, ("A",), {}, {"A": 3})
    with pytest.raises(InputError):
        ActionOnArrangement(2, ("A", "B", "C"), {"s": {"A": "B", "B": "C", "C": "A"}}, {})
    with pytest.raises(InputError):
        quotient_weights({"Z": 3}, _trivial(["A"]))


def test_dm_identify():
    records = entry("dm-weights").dm_records()
    hits = dm_identify((10, [5] * 10, Fraction(3, 5)), records)
    assert [r.label for r in hits] == ["(2,2,2,2,2)/5"]
    assert dm_identify((10, [5] * 10, Fraction(1, 5)), records) == []
    assert [r.label for r in dm_identify((3, [INF, 6, 3], Fraction(1, 72)), records)] == ["(5,4,1,1,1)/6"]
