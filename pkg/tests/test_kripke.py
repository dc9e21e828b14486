import random

import pytest
from hypothesis import given, settings, strategies as st

from plc.diagnosis import build_structure
from plc.errors import BadAgent, UnknownProp
from plc.kripke import (KripkeStructure, belief_accessibility, believes_via_relation,
                        check_condition, dump_structure, eval_formula, extension,
                        load_structure, moses_shoham, truth_set, valid_in)
from plc.lab.gen import ClassSpec, random_structure
from plc.lab.suites import load_fixture
from plc.logic import And, Believe, Implies, Know, Prop, parse
from plc.plaus import BOTTOM, INF, KappaSpace, most_plausible

from strategies import formulas

ALICE = "!K1 !(tell ~>1 !p) & !K1 !(tell ~>1 p)"
FAILING = "hi(l1),!hi(l2),hi(l3),hi(l7),!hi(l8)"


@pytest.fixture(scope="module")
def alice():
    return load_fixture("alice.json")


@pytest.fixture(scope="module")
def diag1():
    return build_structure("fulladder", FAILING, "card")


def test_extension_trivial(alice):
    for w in alice.worlds:
        om = set(alice.space(w, 1).worlds)
        assert set(extension(alice, "true", w, 1)) == om
        assert not extension(alice, "false", w, 1)


def test_extension_differs_by_cell(alice):
    assert set(extension(alice, "tell", "r_tp", 1)) == {"r_tp", "r_tn"}
    assert set(extension(alice, "tell", "l_tp", 1)) == {"l_tp", "l_tn"}
    assert set(extension(alice, "p", "l_tn", 1)) == {"l_tp"}


def test_alice_formula_satisfiable(alice):
    assert valid_in(alice, "p | !p")
    assert valid_in(alice, ALICE)
    r = valid_in(alice, f"!({ALICE})")
    assert not r and r.witness["world"] == "r_tp"
    assert eval_formula(alice, "r_tp", "tell ~>1 p")
    assert eval_formula(alice, "l_tp", "tell ~>1 !p")


def test_alice_conditions(alice):
    sdp = check_condition(alice, "SDP")
    assert not sdp
    cells = [{"r_tp", "r_tn"}, {"l_tp", "l_tn"}]
    pair = {sdp.witness["world"], sdp.witness["other"]}
    assert not any(pair <= c for c in cells)
    assert check_condition(alice, "UNIF")
    assert check_condition(alice, "CONS")


def test_errors(alice):
    with pytest.raises(UnknownProp):
        eval_formula(alice, "r_tp", "nosuch")
    with pytest.raises(BadAgent):
        eval_formula(alice, "r_tp", "K2 p")


def test_empty_space_not_normal():
    M = KripkeStructure(["w"], {"p": ["w"]}, {})
    assert not check_condition(M, "NORM")
    assert check_condition(M, "CONS")
    assert eval_formula(M, "w", "true ~>1 false")  # vacuous on the empty space


def test_true_conditional_on_normal_space():
    M = KripkeStructure(["a", "b"], {}, {}, {1: {w: KappaSpace({"a": 0, "b": 1}) for w in "ab"}})
    assert eval_formula(M, "a", "true ~>1 true")
    assert not eval_formula(M, "a", "true ~>1 false")


def test_diag1_conditions(diag1):
    for c in ("CONS", "REF", "SDP"):
        assert check_condition(diag1, c), c


def test_diag1_believes_x1(diag1):
    w = diag1.world_for({"l1": True, "l2": False, "l3": True, "l7": True, "l8": False})
    assert eval_formula(diag1, w, "B1 faulty(X1)")
    assert not eval_formula(diag1, w, "B1 faulty(X2)")


def test_diag1_belief_relation_is_min_cardinality(diag1):
    rel = belief_accessibility(diag1, 1)
    for w in diag1.worlds[:40]:
        cell = diag1.knows(w, 1)
        low = min(len(diag1.diag_worlds[v].fault) for v in cell)
        assert set(rel[w]) == {v for v in cell if len(diag1.diag_worlds[v].fault) == low}


def test_belief_relation_examples():
    flat = KappaSpace({"a": 0, "b": 0})
    M = KripkeStructure(["a", "b", "c"], {"p": ["a"]}, {1: [["a", "b"], ["c"]]},
                        {1: {"a": flat, "b": flat, "c": KappaSpace({"c": INF})}}, partition=True)
    rel = belief_accessibility(M, 1)
    assert set(rel["a"]) == {"a", "b"}
    assert not rel["c"]
    assert eval_formula(M, "c", "B1 false")
    assert not eval_formula(M, "a", "B1 false")


def test_moses_shoham_rewrite():
    f = parse("B1 (p & B1 q) | K1 p")
    a = Prop("alpha")
    inner = Know(1, Implies(a, Prop("q")))
    assert moses_shoham(f, a) == parse("K1 (alpha => p & K1 (alpha => q)) | K1 p")
    assert moses_shoham(Believe(1, Prop("q")), a) == inner


def test_dump_load_roundtrip(alice):
    M = load_structure(dump_structure(alice))
    for w in alice.worlds:
        assert eval_formula(M, w, ALICE) == eval_formula(alice, w, ALICE)


STATIC = formulas(props=("p", "q"), agents=(1,), temporal=False, max_leaves=6)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), STATIC)
def test_belief_via_relation_matches_expansion(seed, f):
    M = random_structure(ClassSpec(max_worlds=4, conditions={"CONS"}, backend="mixed"),
                         random.Random(seed))
    for w in M.worlds:
        assert believes_via_relation(M, w, 1, f) == eval_formula(M, w, Believe(1, f))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), STATIC)
def test_knowledge_implies_belief_under_cons(seed, f):
    M = random_structure(ClassSpec(max_worlds=4, conditions={"CONS"}), random.Random(seed))
    assert valid_in(M, Implies(Know(1, f), Believe(1, f)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), STATIC, STATIC)
def test_qualitative_belief_conjunction(seed, f, g):
    M = random_structure(ClassSpec(max_worlds=4), random.Random(seed))
    assert valid_in(M, Implies(And(Believe(1, f), Believe(1, g)), Believe(1, And(f, g))))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), STATIC)
def test_moses_shoham_equivalence(seed, f):
    M = random_structure(ClassSpec(max_worlds=4, conditions={"CONS", "SDP"}, backend="mixed"),
                         random.Random(seed))
    obj = dump_structure(M)
    alpha = set()
    for w in M.worlds:
        mp = most_plausible(M.space(w, 1))
        if mp is not BOTTOM:
            alpha |= set(mp)
    obj["props"]["alpha"] = sorted(alpha)
    N = load_structure(obj)
    g = moses_shoham(f, Prop("alpha"))
    assert set(truth_set(N, f)) == set(truth_set(N, g))
