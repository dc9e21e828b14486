import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plc.errors import UniversesOverlap
from plc.lab.suites import check_plex_family, random_small_space
from plc.plaus import (Cmp, KappaSpace, PreferenceSpace, is_qualitative, is_ranking, lex_sum,
                       lex_sum_set, same_space)


def test_earlier_component_dominates():
    s = lex_sum([KappaSpace({"x": 0}), KappaSpace({"y": 0})])
    assert s.cmp({"x"}, {"y"}) is Cmp.GREATER


def test_bottom_component_passes_the_word():
    s = lex_sum([KappaSpace({"x": "inf"}), KappaSpace({"y": 0, "z": 1})])
    assert s.cmp({"x", "z"}, {"y"}) is Cmp.LESS
    assert s.cmp({"x"}, set()) is Cmp.EQUAL


def test_single_component_is_identity():
    s = PreferenceSpace(["a", "b", "c"], [("a", "b")])
    assert same_space(lex_sum([s]).restrict(s.worlds), s)
    assert all(lex_sum([s]).le_mask(a, b) == s.le_mask(a, b)
               for a in range(8) for b in range(8))


def test_restriction_to_component():
    s1, s2 = KappaSpace({"x": 0, "y": 1}), PreferenceSpace(["u", "v"], [("v", "u")])
    s = lex_sum([s1, s2])
    r = s.restrict(s2.worlds)
    assert all(r.cmp(a, b) is s2.cmp(a, b)
               for a in [set(), {"u"}, {"v"}, {"u", "v"}] for b in [set(), {"u"}, {"v"}, {"u", "v"}])


def test_overlap_rejected():
    with pytest.raises(UniversesOverlap):
        lex_sum([KappaSpace({"x": 0}), KappaSpace({"x": 1})])


def test_otimes_any_enumeration_restricts_back():
    a, b = KappaSpace({"x": 0}), KappaSpace({"y": 0})
    for order in ([0, 1], [1, 0]):
        t = lex_sum_set([a, b], order)
        assert t.restrict({"x"}).cmp({"x"}, set()) is Cmp.GREATER
        assert t.restrict({"y"}).cmp({"y"}, set()) is Cmp.GREATER
    assert same_space(lex_sum_set([a]).restrict({"x"}), a)


def test_three_kappa_spaces_stay_qualitative_and_ranked():
    parts = [KappaSpace({"a": 0, "b": 2}), KappaSpace({"c": "inf"}), KappaSpace({"d": 1, "e": 0})]
    s = lex_sum_set(parts)
    assert is_qualitative(s)
    assert is_ranking(s)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sum_laws_on_random_families(seed):
    rng = random.Random(seed)
    sizes = [rng.randint(0, 3) for _ in range(rng.randint(1, 3))]
    spaces, k = [], 0
    for size in sizes:
        ws = [f"v{k + j}" for j in range(size)]
        k += size
        spaces.append(random_small_space(ws, rng))
    union = [w for s in spaces for w in s.worlds]
    e = [w for w in union if rng.random() < 0.5]
    assert check_plex_family(spaces, e) is None
