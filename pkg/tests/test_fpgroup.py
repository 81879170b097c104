from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ballquot.errors import CosetOverflow, InconsistencyError, InputError
from ballquot.fpgroup import (
    CosetTable,
    OrbifoldSignature,
    Presentation,
    etale_cover_genus,
    free_reduce,
    inverse_word,
    low_index_subgroups,
    normal_subgroup_search,
    parse_word,
    schreier_generators,
    subgroup_signature,
    todd_coxeter,
    triangle_chi,
    triangle_elliptics,
)
from ballquot.groups import Perm

from conftest import entry

D2310 = Presentation.triangle(2, 3, 10)
D555 = Presentation.triangle(5, 5, 5, "xy")
LAMBDA = ["(ab)^2aBaba", "abaBa(ba)^2"]


def test_word_parsing():
    assert parse_word("(ab)^2aBaba") == "ababaBaba"
    assert parse_word("a^-2") == "AA"
    assert parse_word("(aB)^-1") == "bA"
    assert free_reduce("abBAa") == "a"
    assert inverse_word("abC") == "cBA"
    with pytest.raises(InputError):
        parse_word("ac", ["a", "b"])
    with pytest.raises(InputError):
        parse_word("(ab", ["a", "b"])


@pytest.mark.parametrize(
    "pres,order",
    [
        (Presentation(("a",), ("aaaaaaa",)), 7),
        (Presentation(("a", "b"), ("aa", "bbb", "abab")), 6),
        (Presentation(("a", "b"), ("aa", "bbb", "abababab")), 24),
        (Presentation(("a", "b"), ("aa", "bbb", "ababababab")), 60),
        (Presentation(("a", "b"), ("aBAb",)), None),
    ],
    ids=["C7", "S3", "S4", "A5", "free-abelian"],
)
def test_group_orders(pres, order):
    if order is None:
        with pytest.raises(CosetOverflow):
            todd_coxeter(pres, (), max_cosets=500)
        return
    table = todd_coxeter(pres)
    assert table.index == order and table.verify()


def _cyclic_rotations(word):
    return [word[k:] + word[:k] for k in range(len(word))]


@given(
    st.permutations(["aa", "bbb", "ab" * 10]),
    st.integers(0, 19),
    st.permutations(LAMBDA),
    st.booleans(),
)
def test_enumeration_order_insensitive(relators, rot, words, padded):
    rels = list(relators)
    rels[-1] = _cyclic_rotations(rels[-1])[rot % len(rels[-1])]
    pres = Presentation(("a", "b"), tuple(rels))
    ws = list(words) + (["aA", words[0] + words[1]] if padded else [])
    table = todd_coxeter(pres, ws)
    assert table.index == 10
    assert table.canonical() == todd_coxeter(D2310, LAMBDA).canonical()


def test_overflow_is_reported():
    with pytest.raises(CosetOverflow) as info:
        todd_coxeter(D2310, LAMBDA, max_cosets=5)
    assert info.value.limit == 5


# ---------------------------------------------------------------- the index-10 subgroup

def test_lambda_table_and_signature():
    table = todd_coxeter(D2310, LAMBDA)
    assert table.index == 10
    assert table.perms["a"].cycle_type() == [2] * 5
    assert table.perms["b"].cycle_type() == [3, 3, 3, 1]
    assert table.perm_of("ab").cycle_type() == [10]
    sig = subgroup_signature(table, triangle_elliptics("ab", (2, 3, 10)), triangle_chi(2, 3, 10))
    assert (sig.genus, sig.cones, sig.chi) == (1, (3,), Fraction(-2, 3))
    assert entry("triangle-tower").subgroup("lambda")["discrepancy"]


def test_lambda_stated_genus_zero_is_inconsistent():
    # the genus-0 reading forces a positive Euler characteristic, impossible at index 10
    with pytest.raises(InconsistencyError):
        OrbifoldSignature(0, (3,), 10 * triangle_chi(2, 3, 10))


def test_signature_errors():
    with pytest.raises(InputError):
        triangle_chi(2, 3, 6)
    table = todd_coxeter(D2310, LAMBDA)
    with pytest.raises(InconsistencyError):
        subgroup_signature(table, [("a", 3)], triangle_chi(2, 3, 10))
    assert etale_cover_genus(2, 5) == 6
    with pytest.raises(InputError):
        etale_cover_genus(0, 2)


# ---------------------------------------------------------------- word-search oracle

@pytest.mark.parametrize(
    "sub,pres,target",
    [
        ("delta555", D2310, OrbifoldSignature(0, (5, 5, 5), Fraction(-2, 5))),
        ("sigma", D555, OrbifoldSignature(2, (), Fraction(-2))),
    ],
)
def test_search_oracle_reproduces_catalogue(sub, pres, target):
    data = entry("triangle-tower").subgroup(sub)
    search = data["search"]
    chi = triangle_chi(*entry("triangle-tower").data["groups"][data["group"]]["triangle"])
    elliptic = [(w, m) for w, m in data["elliptic"]]
    found = normal_subgroup_search(pres, search["target_index"], elliptic, chi, target,
                                   search["max_length"], search["max_cosets"])
    assert found is not None
    assert found.relator == search["relator"]
    assert list(found.subgroup_words) == data["words"]
    table = todd_coxeter(pres, data["words"])
    assert table.index == search["target_index"] and table.verify()
    sig = subgroup_signature(table, elliptic, chi)
    assert (sig.genus, sig.cones, sig.chi) == (target.genus, target.cones, target.chi)


# ---------------------------------------------------------------- low-index oracle

SIGMA = ["yX", "xyXX", "Xy", "xxxxx", "xxyxx", "XXyx"]


@pytest.mark.parametrize("pres,words,index", [(D2310, LAMBDA, 10), (D555, SIGMA, 5)], ids=["lambda", "sigma"])
def test_low_index_oracle_contains_enumerated_table(pres, words, index):
    found = low_index_subgroups(pres, index)
    table = todd_coxeter(pres, words)
    assert table.index == index
    assert table.canonical() in found


def test_low_index_tables_are_subgroup_tables():
    # each exhaustive table, fed back as Schreier generators, re-enumerates to itself
    for canon in low_index_subgroups(D2310, 6):
        perms = {g: Perm(img) for g, img in zip(D2310.generators, canon)}
        table = CosetTable(D2310, (), 6, perms)
        assert table.verify()
        again = todd_coxeter(D2310, schreier_generators(table))
        assert again.canonical() == canon


def test_low_index_needs_power_relators():
    with pytest.raises(InputError):
        low_index_subgroups(Presentation(("a", "b"), ("abAB",)), 3)
