from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plc.errors import CapExceeded, OutOfUniverse
from plc.lab.oracles import free_lub_table, mp_brute
from plc.lab.posets import labeled_posets
from plc.plaus import (BOTTOM, UNDEFINED, Cmp, EpsFamilySpace, KappaSpace, PossibilitySpace,
                       PreferenceSpace, RelationalSpace, TableSpace, check_space_laws,
                       empty_space, is_qualitative, is_ranking, materialize, most_plausible,
                       probability_table, same_space, space_from_json)

from strategies import kappa_spaces, preference_spaces, qualitative_spaces, subsets

CHAIN = PreferenceSpace(["a", "b", "c"], [("a", "b"), ("b", "c")])


def test_chain_cmp_examples():
    assert CHAIN.cmp({"b", "c"}, {"a"}) is Cmp.LESS
    assert CHAIN.cmp({"a", "b", "c"}, {"a", "b", "c"}) is Cmp.EQUAL
    assert CHAIN.cmp(set(), {"c"}) is Cmp.LESS


def test_incomparable_singletons():
    s = PreferenceSpace(["a", "b"])
    assert s.cmp({"a"}, {"b"}) is Cmp.INCOMPARABLE
    assert not is_ranking(s)


def test_kappa_higher_is_less_plausible():
    s = KappaSpace({"w1": 0, "w2": 1})
    assert s.cmp({"w2"}, {"w1"}) is Cmp.LESS


def test_foreign_world_rejected():
    with pytest.raises(OutOfUniverse):
        CHAIN.cmp({"z"}, {"a"})


def test_cycle_rejected():
    with pytest.raises(ValueError):
        PreferenceSpace(["a", "b"], [("a", "b"), ("b", "a")])


def test_probability_table_is_not_qualitative():
    t = probability_table({"w1": "1/3", "w2": "1/3", "w3": "1/3"})
    r = is_qualitative(t)
    assert not r
    assert r.witness["axiom"] == "A2"


def test_empty_space():
    e = empty_space()
    assert is_qualitative(e)
    assert not e.is_normal()
    assert most_plausible(e) is BOTTOM
    assert materialize(e).n == 0


def test_most_plausible_examples():
    assert most_plausible(CHAIN) == {"a"}
    assert most_plausible(KappaSpace({"w": 0})) == {"w"}
    assert most_plausible(CHAIN.restrict({"b", "c"})) == {"b"}
    assert most_plausible(KappaSpace({"w": "inf"})) is BOTTOM


def test_most_plausible_undefined_on_probability_table():
    # every pair of worlds beats the third, and no single world does
    t = probability_table({"w1": "1/3", "w2": "1/3", "w3": "1/3"})
    assert most_plausible(t) is UNDEFINED


def test_restrict_kappa_keeps_levels():
    s = KappaSpace({"a": 0, "b": 1, "c": 2}).restrict({"b", "c"})
    assert s.cmp({"c"}, {"b"}) is Cmp.LESS
    assert most_plausible(s) == {"b"}


def test_restrict_to_everything_is_identity():
    assert same_space(CHAIN.restrict(CHAIN.worlds), CHAIN)


def test_restrict_to_nothing_is_empty():
    assert CHAIN.restrict(set()).n == 0


def test_materialize_agrees():
    for s in [PreferenceSpace(["a", "b"], [("a", "b")]), KappaSpace({"x": 0, "y": 2, "z": "inf"})]:
        t = materialize(s)
        assert isinstance(t, TableSpace)
        for a, b in product(range(s.full + 1), repeat=2):
            assert t.le_mask(a, b) == s.le_mask(a, b)


def test_qualitative_cap():
    t = probability_table({f"w{k}": "1/9" for k in range(9)})
    with pytest.raises(CapExceeded):
        is_qualitative(t)


def test_table_validation():
    with pytest.raises(ValueError):
        # value of the empty set must be the bottom element
        TableSpace(["a"], ["lo", "hi"], [("lo", "hi")], {frozenset(): "hi", frozenset({"a"}): "lo"})


def test_relational_space_laws_are_tested():
    # "bigger sets are less plausible" violates A1
    bad = RelationalSpace(["a", "b"], lambda a, b: bin(a).count("1") >= bin(b).count("1"))
    r = check_space_laws(bad)
    assert not r and r.witness["law"] == "A1"


def test_json_roundtrip_each_backend():
    spaces = [CHAIN, KappaSpace({"a": 0, "b": "inf"}), PossibilitySpace({"a": "1", "b": "1/2"}),
              EpsFamilySpace({"a": 1, "b": 0}), probability_table({"a": "1/4", "b": "3/4"})]
    for s in spaces:
        back = space_from_json(s.describe())
        assert same_space(s, back)


def test_same_space_ignores_kappa_shift():
    assert same_space(KappaSpace({"a": 0, "b": 1}), KappaSpace({"a": 2, "b": 5}))
    assert not same_space(KappaSpace({"a": 0, "b": 1}), KappaSpace({"a": 1, "b": 0}))


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_preference_matches_free_lub_table(n):
    ws = [f"w{k}" for k in range(n)]
    for below in labeled_posets(n):
        s = PreferenceSpace.from_below(ws, below)
        t = free_lub_table(ws, below)
        for a, b in product(range(s.full + 1), repeat=2):
            assert s.le_mask(a, b) == t.le_mask(a, b)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_every_small_preference_space_is_qualitative(n):
    ws = [f"w{k}" for k in range(n)]
    for below in labeled_posets(n):
        # the enumeration cap is lowered so the check really enumerates
        assert is_qualitative(PreferenceSpace.from_below(ws, below), cap=8)


@settings(max_examples=60, deadline=None)
@given(qualitative_spaces(4))
def test_space_laws(s):
    assert check_space_laws(s)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_a1_monotone(data):
    s = data.draw(qualitative_spaces(5))
    b = data.draw(st.integers(0, s.full))
    a = data.draw(st.integers(0, b)) & b
    assert s.cmp_mask(a, b) in (Cmp.LESS, Cmp.EQUAL)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_eps_equals_kappa(data):
    s = data.draw(kappa_spaces(6))
    e = EpsFamilySpace(s.value_map(), worlds=s.worlds)
    a, b = data.draw(st.integers(0, s.full)), data.draw(st.integers(0, s.full))
    assert e.cmp_mask(a, b) is s.cmp_mask(a, b)


@settings(max_examples=60, deadline=None)
@given(qualitative_spaces(5))
def test_mp_fast_path_matches_search(s):
    mp = most_plausible(s)
    if not s.is_normal():
        assert mp is BOTTOM
    else:
        assert [s.members(m) for m in mp_brute(s)] == [mp]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_mp_inside_every_dominating_set(data):
    s = data.draw(qualitative_spaces(5))
    if not s.is_normal():
        return
    a = data.draw(st.integers(0, s.full))
    if s.gt_mask(a, s.full & ~a):
        assert most_plausible(s) <= s.members(a)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_restrict_satisfies_cond(data):
    s = data.draw(qualitative_spaces(5))
    e = data.draw(subsets(s))
    r = s.restrict(e)
    a, b = data.draw(subsets(r)), data.draw(subsets(r))
    assert r.cmp(a, b) is s.cmp(a, b)


@settings(max_examples=40, deadline=None)
@given(preference_spaces(4))
def test_preference_qualitative_by_enumeration(s):
    assert is_qualitative(s, cap=8)
