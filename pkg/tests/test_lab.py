import json

import pytest

from plc.kripke import check_condition, eval_formula, load_structure
from plc.lab import Report, replay, run_suite
from plc.lab.gen import (ClassSpec, SystemSpec, enumerate_structures, random_structures,
                         random_systems)
from plc.lab.oracles import preferential_oracle
from plc.lab.posets import count_posets, set_partitions, weak_orders
from plc.lab.suites import (check_scheme, check_scheme_on, load_fixture, pool_envs,
                            single_space_structures)
from plc.logic import Cond, parse
from plc.plaus import KappaSpace, PreferenceSpace
from plc.temporal import has_perfect_recall, is_synchronous, satisfies_prior


def test_family_counts():
    assert [count_posets(n) for n in range(5)] == [1, 1, 3, 19, 219]
    assert [len(weak_orders(n)) for n in range(5)] == [1, 1, 3, 13, 75]
    assert [len(list(set_partitions(range(n)))) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_nineteen_orders_on_three_worlds():
    orders = {key[2] for key, _ in single_space_structures(3, props=())
              if key[0] == 3 and key[1] == 7}
    assert len(orders) == 19


def test_one_world_structures():
    items = list(enumerate_structures(ClassSpec(max_worlds=1)))
    assert 1 <= len(items) <= 3
    assert all(len(M.worlds) == 1 for _, M in items)


@pytest.mark.parametrize("conds", [{"CONS", "NORM"}, {"REF", "SDP"}, {"UNIF"}, {"RANK", "CONS"}])
def test_generated_structures_meet_their_conditions(conds):
    spec = ClassSpec(max_worlds=3, conditions=conds)
    items = list(enumerate_structures(spec))
    items += list(random_structures(ClassSpec(max_worlds=5, conditions=conds, backend="mixed"), 40, 1))
    assert items
    for _, M in items:
        for c in conds | {"QUAL"}:
            assert check_condition(M, c), (c, M)


def test_generated_systems_meet_their_conditions():
    for _, I in random_systems(SystemSpec(rank=False, shared=False), 30, 5):
        assert is_synchronous(I) and has_perfect_recall(I) and satisfies_prior(I)


def test_generators_are_deterministic():
    a = [json.dumps(M.frame.props, sort_keys=True) for _, M in
         random_structures(ClassSpec(max_worlds=4), 10, 42)]
    b = [json.dumps(M.frame.props, sort_keys=True) for _, M in
         random_structures(ClassSpec(max_worlds=4), 10, 42)]
    assert a == b
    r1 = run_suite("coherence", seed=3, systems=20).lines()
    r2 = run_suite("coherence", seed=3, systems=20).lines()
    assert r1 == r2


def test_kd45_passes_on_cons_norm():
    spec = ClassSpec(max_worlds=3, conditions={"CONS", "NORM"})
    for scheme in ("K2[B1]", "K4[B1]", "K5[B1]", "K6[B1]"):
        assert check_scheme(scheme, spec).ok, scheme


def test_k3_for_belief_fails_and_replays():
    spec = ClassSpec(max_worlds=3, conditions={"CONS", "NORM"})
    rep = check_scheme("K3[B1]", spec, expect="counterexample")
    rec = rep.records[0]
    assert rec.verdict == "counterexample" and rec.ok
    assert replay(rec.witness)


def test_klm_and_fails_on_probability_fixture():
    M = load_fixture("prob_and.json")
    rec = check_scheme_on("t", "KLM-AND", [("prob_and", M)], pool_envs(("p", "q"), 1),
                          expect="counterexample")
    assert rec.verdict == "counterexample"
    assert replay(rec.witness)


def test_replay_rejects_a_repaired_witness():
    M = load_fixture("prob_and.json")
    rec = check_scheme_on("t", "KLM-AND", [("prob_and", M)], pool_envs(("p", "q"), 1),
                          expect="counterexample")
    w = json.loads(json.dumps(rec.witness))
    # a uniform preference space makes the AND rule hold again
    for name, spec in w["structure"]["P"]["1"].items():
        w["structure"]["P"]["1"][name] = {"backend": "kappa", "omega": spec["omega"],
                                         "kappa": {x: 0 for x in spec["omega"]}}
    assert not replay(w)


def test_preferential_oracle_examples():
    chain = PreferenceSpace.from_below(["a", "b", "c"], [0, 1, 3])  # a < b < c
    M = load_structure({"worlds": ["a", "b", "c"], "props": {"p": ["a", "b"], "q": ["a"]},
                        "P": {"1": {w: chain.describe() for w in "abc"}}})
    for phi, psi in [("p", "q"), ("q", "p"), ("!p", "q"), ("true", "p"), ("p", "!q")]:
        f = Cond(1, parse(phi), parse(psi))
        assert preferential_oracle(M, parse(phi), parse(psi), "a") == eval_formula(M, "a", f)
    assert preferential_oracle(M, parse("false"), parse("q"), "a")
    assert eval_formula(M, "a", "false ~>1 q")
    assert preferential_oracle(M, parse("true"), parse("p"), "a")


def test_preferential_oracle_needs_preference_space():
    M = load_structure({"worlds": ["a"], "P": {"1": {"a": KappaSpace({"a": 0}).describe()}}})
    with pytest.raises(TypeError):
        preferential_oracle(M, parse("true"), parse("true"), "a")


def test_report_format():
    rep = run_suite("coherence", seed=0, systems=10)
    assert isinstance(rep, Report) and rep.ok
    for line in rep.lines():
        d = json.loads(line)
        assert {"suite", "scheme", "seed", "structure_digest", "verdict", "ok", "caps"} <= set(d)
        if d["verdict"] == "counterexample":
            assert replay(d["witness"])


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nosuch")


@pytest.mark.parametrize("name", ["prior_prop", "moses_shoham", "kb"])
def test_other_suites(name):
    rep = run_suite(name, seed=0)
    assert rep.records and rep.ok, rep.summary()
    for r in rep.records:
        if r.verdict == "counterexample":
            assert replay(r.witness)
