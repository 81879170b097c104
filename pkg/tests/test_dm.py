from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ballquot.dm import INT, NEITHER, SIGMA_INT_ONLY, DMWeights, find, int_condition, validate
from ballquot.errors import InputError

from conftest import entry

RECORDS = entry("dm-weights").dm_records()
RAW = entry("dm-weights").data["records"]


def _oracle_class(mu):
    """Direct check over ordered pairs."""
    bad, half_ok = [], True
    for i in range(len(mu)):
        for j in range(i + 1, len(mu)):
            s = mu[i] + mu[j]
            if s < 1 and (1 / (1 - s)).denominator != 1:
                bad.append((i, j))
                if not (mu[i] == mu[j] and (2 / (1 - s)).denominator == 1):
                    half_ok = False
    if not bad:
        return INT
    return SIGMA_INT_ONLY if half_ok else NEITHER


def test_all_records_valid():
    assert len(RECORDS) == 5
    for r in RECORDS:
        rep = validate(r)
        assert rep.valid and rep.total == 2


@pytest.mark.parametrize("n", range(5))
def test_classification_matches_record_and_oracle(n):
    r = RECORDS[n]
    assert int_condition(r) == RAW[n]["int_class"] == _oracle_class(r.mu)


def test_known_flags():
    flags = {r.label: r.arithmetic_flag for r in RECORDS}
    assert flags["(5,4,1,1,1)/6"] == "arithmetic"
    assert flags["(6,5,5,4,4)/12"] == "nonarithmetic"
    assert int_condition(DMWeights.parse("5,4,1,1,1/6")) == SIGMA_INT_ONLY
    assert int_condition(DMWeights.parse("2,2,2,2,2/5")) == INT


@given(st.integers(2, 24).flatmap(
    lambda d: st.lists(st.integers(1, d - 1), min_size=3, max_size=6).map(lambda ns: DMWeights(tuple(ns), d))))
def test_int_implies_sigma_int(w):
    mu = w.mu
    pairs = [(a, b) for i, a in enumerate(mu) for b in mu[i + 1:] if a + b < 1]
    int_ok = all((1 / (1 - a - b)).denominator == 1 for a, b in pairs)
    sigma_ok = all((1 / (1 - a - b)).denominator == 1 or (a == b and (2 / (1 - a - b)).denominator == 1)
                   for a, b in pairs)
    if int_ok:
        assert sigma_ok
    assert int_condition(w) == (INT if int_ok else SIGMA_INT_ONLY if sigma_ok else NEITHER)


def test_validation_problems():
    rep = validate(DMWeights.parse("1,1,1,1,1/5"))
    assert not rep.valid and "sum ≠ 2" in rep.problems[0]
    rep = validate(DMWeights.parse("4,0,0/2"))
    assert len(rep.problems) == 3


def test_parse_and_find():
    w = DMWeights.parse("(4,3,3,3,3)/8")
    assert w.mu[0] == Fraction(1, 2)
    assert find(RECORDS, DMWeights.parse("3,3,4,3,3/8")).label == "(4,3,3,3,3)/8"
    assert find(RECORDS, DMWeights.parse("1,1,1,1,1,1,1,1,1,1/5")) is None
    for bad in ("5,4,1", "a,b/c", "1,1/0"):
        with pytest.raises(InputError):
            DMWeights.parse(bad)
    with pytest.raises(InputError):
        DMWeights((1, 1), 2, "maybe")
