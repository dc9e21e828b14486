"""Executable suites: every soundness claim as an enumerated check.

Each suite returns a ``Report`` of ``Record``s.  A record states what was
expected (a scheme valid on a class, or a counterexample found once a
condition is dropped) and what was observed; failures carry a serialized
witness that ``replay`` re-verifies.
"""
import json
import random
import time
from itertools import product
from pathlib import Path

from ..common import bits
from ..kripke import KripkeStructure, belief_masks, check_condition, dump_structure, moses_shoham
from ..logic import Prop, parse, to_text
from ..plaus import (BOTTOM, UNDEFINED, EpsFamilySpace, KappaSpace, PossibilitySpace,
                     PreferenceSpace, check_space_laws, is_qualitative, is_ranking, lex_sum,
                     lex_sum_set, most_plausible_mask, probability_table, space_from_json)
from ..temporal import (InterpretedSystem, dump_system, has_perfect_recall, is_coherent,
                        is_synchronous, run_structure)
from .gen import (ClassSpec, SystemSpec, enumerate_structures, random_poset_space,
                  random_structures, random_system, random_systems, world_names)
from .oracles import eps_le, free_lub_table, lewis_conditional, mp_brute
from .posets import labeled_posets
from .report import Digest, Record, Report, digest
from .schemes import Compiled, all_envs, closure_pool, compile_formula, get_scheme, KLM_RULES

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


# -- generic scheme checking ----------------------------------------------------

def frame_envs(obj, metavars):
    return all_envs(metavars, range(obj.frame.full + 1))


def pool_envs(props=("p", "q"), depth=3, unary=("!",), binary=("&", "|", "=>", "~>")):
    def envs(obj, metavars):
        pool = getattr(obj, "_pool", None)
        if pool is None:
            pool = obj._pool = closure_pool(obj.frame, props, depth, unary, binary)
        return all_envs(metavars, sorted(pool))
    return envs


def slice_envs(obj, metavars):
    """Metavariables range over subsets of the points at one time (each time in turn)."""
    I = obj
    for m in range(I.horizon + 1):
        pts = [I.index[(r, m)] for r in I.runs]
        masks = [sum(1 << pts[k] for k in bits(s)) for s in range(1 << len(pts))]
        yield from all_envs(metavars, masks)


def static_envs(obj, metavars):
    """Metavariables range over run sets, true at every time of those runs."""
    I = obj
    rows = [sum(1 << I.index[(r, m)] for m in range(I.horizon + 1)) for r in I.runs]
    masks = [sum(rows[k] for k in bits(s)) for s in range(1 << len(rows))]
    return all_envs(metavars, masks)


def check_scheme_on(suite, scheme, items, envs=frame_envs, expect="valid", seed=None,
                    params=None, budget=None):
    """Run one scheme over a stream of (key, structure-or-system) pairs."""
    return check_schemes_on(suite, [scheme], items, envs, {scheme: expect}, seed, params, budget)[0]


def check_schemes_on(suite, schemes, items, envs=frame_envs, expect=None, seed=None,
                     params=None, budget=None):
    """Run several schemes over one stream; one Record per scheme, in order.

    A scheme stops being checked at its first counterexample.  ``expect``
    maps scheme names to "valid" (the default) or "counterexample";
    ``budget`` bounds wall time in seconds.
    """
    expect = expect or {}
    comps = {s: Compiled(get_scheme(s)) for s in schemes}
    pending = list(schemes)
    out = {}
    dg = Digest()
    start = time.monotonic()
    for key, obj in items:
        dg.add(key)
        fr = obj.frame
        for s in list(pending):
            comp = comps[s]
            for env in envs(obj, comp.metavars):
                fail = comp.failure(fr, env)
                if fail:
                    wit = formula_witness(obj, comp.scheme, env, fail)
                    out[s] = Record(suite, s, seed, digest(wit), "counterexample",
                                    expect.get(s, "valid"), dg.count, wit, params or {})
                    pending.remove(s)
                    break
        if not pending:
            break
        if budget is not None and time.monotonic() - start > budget:
            break
    for s in pending:
        out[s] = Record(suite, s, seed, dg.hexdigest(), "valid", expect.get(s, "valid"),
                        dg.count, None, params or {})
    return [out[s] for s in schemes]


def check_scheme(scheme, spec, formula_pool_depth=None, seed=0, random_count=0, expect="valid"):
    """One scheme over a class: exhaustive up to ``spec.max_worlds`` (single agent, at
    most 4 worlds), then ``random_count`` seeded random structures.

    With ``formula_pool_depth`` None the metavariables range over every subset
    of worlds; otherwise over the sets definable at that depth from the
    spec's propositions, which needs random structures (they carry valuations).
    """
    name = f"{scheme}/{','.join(sorted(spec.conditions)) or 'QUAL'}"
    rep = Report(name)
    streams = []
    if spec.agents == 1 and spec.max_worlds <= 4 and formula_pool_depth is None:
        streams.append(enumerate_structures(spec))
    if random_count or not streams:
        count = random_count or 200
        streams.append(((("random", seed, k), M) for k, M in random_structures(spec, count, seed)))
    envs = frame_envs if formula_pool_depth is None else pool_envs(spec.props, formula_pool_depth,
                                                                   unary=("!", "K", "B"))
    params = {"class": spec.describe(), "depth": formula_pool_depth, "random": random_count}
    rep.add(check_scheme_on("check", scheme, _chain(*streams), envs, expect, seed, params))
    return rep


def formula_witness(obj, scheme, env, fail_mask):
    """Serializable counterexample: the structure with metavariables as propositions."""
    fr = obj.frame
    point = fr.labels[next(bits(fail_mask))]
    prem = list(scheme.premises)
    concl = scheme.conclusion
    reps = {}
    pool = getattr(obj, "_pool", None)
    if pool:
        reps = {v: to_text(pool[m]) for v, m in env.items() if m in pool}
    if isinstance(obj, InterpretedSystem):
        data = dump_system(obj)
        for v, m in env.items():
            data["props"][v] = [[r, t] for r, t in fr.members(m)]
            data["props"][v].sort(key=lambda p: obj.index[tuple(p)])
        return {"kind": "system", "system": data, "point": list(point), "formula": concl,
                "premises": prem, "scheme": scheme.name, "representatives": reps}
    data = dump_structure(obj)
    for v, m in env.items():
        data["props"][v] = [fr.labels[k] for k in bits(m)]
    return {"kind": "kripke", "structure": data, "world": point, "formula": concl,
            "premises": prem, "scheme": scheme.name, "representatives": reps}


def _limit(items, n):
    for k, it in enumerate(items):
        if k >= n:
            return
        yield it


def _chain(*streams):
    for s in streams:
        yield from s


# -- klm -----------------------------------------------------------------------

def single_space_structures(max_worlds=3, props=("p", "q")):
    """One preference space shared by every world, knowledge total; all valuations.

    Universes range over the nonempty subsets of the worlds and orders over
    all labeled posets on each universe.
    """
    for n in range(1, max_worlds + 1):
        worlds = world_names(n)
        for om in range(1, 1 << n):
            members = [worlds[k] for k in bits(om)]
            for below in labeled_posets(len(members)):
                s = PreferenceSpace.from_below(members, below)
                for vals in product(range(1 << n), repeat=len(props)):
                    pm = {p: [worlds[k] for k in bits(v)] for p, v in zip(props, vals)}
                    M = KripkeStructure(worlds, pm, {1: [worlds]}, {1: {w: s for w in worlds}},
                                        agents=1, partition=True, s5=False)
                    yield (n, om, below, vals), M


def load_fixture(name):
    from ..kripke import load_structure
    return load_structure(json.loads((FIXTURES / name).read_text()), s5=False)


def suite_klm(seed=0, max_worlds=3, depth=3, **_):
    rep = Report("klm")
    envs = pool_envs(depth=depth)
    params = {"class": "pref-single-space", "max_worlds": max_worlds, "depth": depth}
    for rec in check_schemes_on("klm", KLM_RULES, single_space_structures(max_worlds), envs,
                                params=params):
        rep.add(rec)
    M = load_fixture("prob_and.json")
    rep.add(check_scheme_on("klm", "KLM-AND", [("prob_and.json", M)], envs,
                            expect="counterexample", params={"class": "probability-table"}))
    return rep


# -- kd45 ----------------------------------------------------------------------

KD45_PLAN = [
    # (conditions, valid schemes, schemes expected to fail)
    ((), ["K2[B1]", "RK2[B1]"], ["K4[B1]"]),
    (("CONS",), ["K2[B1]", "RK2[B1]", "K4[B1]", "K5[B1]"], ["K6[B1]"]),
    (("CONS", "NORM"), ["K2[B1]", "RK2[B1]", "K4[B1]", "K5[B1]", "K6[B1]"], ["K3[B1]"]),
]


def _class_stream(conds, seed, exhaustive_worlds, random_count, random_worlds, backend="mixed"):
    ex = ClassSpec(max_worlds=exhaustive_worlds, conditions=frozenset(conds), props=())
    rnd = ClassSpec(max_worlds=random_worlds, conditions=frozenset(conds), backend=backend)
    return _chain(enumerate_structures(ex),
                  ((("random", seed, k), M) for k, M in random_structures(rnd, random_count, seed)))


def suite_kd45(seed=0, max_worlds=3, random_count=500, random_worlds=5, **_):
    rep = Report("kd45")
    for conds, valid, invalid in KD45_PLAN:
        params = {"conditions": list(conds), "exhaustive_worlds": max_worlds,
                  "random": random_count, "random_worlds": random_worlds}
        items = _class_stream(conds, seed, max_worlds, random_count, random_worlds)
        expect = {s: "counterexample" for s in invalid}
        for rec in check_schemes_on("kd45", valid + invalid, items, expect=expect, seed=seed,
                                    params=params):
            rep.add(rec)
    return rep


# -- kb ------------------------------------------------------------------------

KB_PLAN = [
    ((), ["KB1", "QUAL-b", "QUAL-c", "K2[K1]", "K3[K1]", "K4[K1]", "K5[K1]", "K6[K1]",
          "RK2[K1]", "K1", "RK1", "C1", "KB2"]),
    (("CONS",), ["KB2"]),
]
KB_SMALL = ["QUAL-a", "C2", "C3", "C4", "RC1", "RC2"]   # three metavariables: two worlds exhaustive
KB_INVALID = {((), "KB2")}


def suite_kb(seed=0, max_worlds=3, random_count=150, random_worlds=4, **_):
    rep = Report("kb")
    for conds, schemes in KB_PLAN:
        params = {"conditions": list(conds), "exhaustive_worlds": max_worlds,
                  "random": random_count, "random_worlds": random_worlds}
        expect = {s: "counterexample" for s in schemes if (conds, s) in KB_INVALID}
        items = _class_stream(conds, seed, max_worlds, random_count, random_worlds)
        for rec in check_schemes_on("kb", schemes, items, expect=expect, seed=seed, params=params):
            rep.add(rec)
    ex = min(max_worlds, 2)
    params = {"conditions": [], "exhaustive_worlds": ex, "random": random_count,
              "random_worlds": random_worlds}
    items = _class_stream((), seed, ex, random_count, random_worlds)
    for rec in check_schemes_on("kb", KB_SMALL, items, seed=seed, params=params):
        rep.add(rec)
    rep.add(_belief_relation_check(seed, max_worlds, random_count, random_worlds))
    return rep


def _belief_relation_check(seed, max_worlds, random_count, random_worlds):
    """B via the expansion agrees with B via the MP-derived accessibility relation."""
    dg = Digest()
    for key, M in _class_stream((), seed, max_worlds, random_count, random_worlds):
        dg.add(key)
        fr = M.frame
        rel = belief_masks(M, 1)
        for a in range(fr.full + 1):
            via_exp, _ = fr.op_believe(1, a)
            via_rel = sum(1 << w for w in range(fr.n) if not rel[w] & ~a)
            if via_exp != via_rel:
                wit = {"kind": "kripke", "structure": dump_structure(M), "check": "belief-relation",
                       "set": sorted(fr.members(a)), "expansion": sorted(fr.members(via_exp)),
                       "relation": sorted(fr.members(via_rel))}
                return Record("kb", "B-relation", seed, digest(wit), "counterexample", "valid",
                              dg.count, wit)
    return Record("kb", "B-relation", seed, dg.hexdigest(), "valid", "valid", dg.count)


# -- cext ----------------------------------------------------------------------

CEXT_PLAN = [("C5", "RANK"), ("C6", "NORM"), ("C7", "REF"), ("C8", "UNIF"),
             ("C9", "CONS"), ("C10", "SDP")]


def suite_cext(seed=0, max_worlds=2, random_count=150, random_worlds=4, **_):
    rep = Report("cext")
    for k, (scheme, cond) in enumerate(CEXT_PLAN):
        params = {"condition": cond, "exhaustive_worlds": max_worlds, "random": random_count,
                  "random_worlds": random_worlds}
        items = _class_stream((cond,), seed + k, max_worlds, random_count, random_worlds)
        rep.add(check_scheme_on("cext", scheme, items, seed=seed + k, params=params))
        # dropped: partial-order spaces so that RANK can fail as well
        backend = "pref" if cond == "RANK" else "mixed"
        items = _class_stream((), seed + k, max_worlds, 4 * random_count, random_worlds, backend)
        rep.add(check_scheme_on("cext", scheme, items, expect="counterexample", seed=seed + k,
                                params={**params, "condition": f"-{cond}"}))
    return rep


# -- plex ----------------------------------------------------------------------

def random_small_space(ws, rng, kinds=("pref", "kappa", "poss", "table")):
    kind = rng.choice(kinds)
    ws = list(ws)
    if kind == "pref":
        return random_poset_space(ws, rng)
    if kind == "kappa":
        return KappaSpace({w: rng.choice([0, 1, 2, "inf"]) for w in ws}, worlds=ws)
    if kind == "eps":
        return EpsFamilySpace({w: rng.choice([0, 1, 2, "inf"]) for w in ws}, worlds=ws)
    if kind == "poss":
        return PossibilitySpace({w: rng.choice(["0", "1/3", "1/2", "1"]) for w in ws}, worlds=ws)
    weights = {w: rng.randint(0, 3) for w in ws}
    if not any(weights.values()) and ws:
        weights[ws[0]] = 1
    total = sum(weights.values()) or 1
    return probability_table({w: f"{v}/{total}" for w, v in weights.items()})


def _same_order(s1, s2, worlds=None):
    """First pair of subsets of ``worlds`` ordered differently by s1 and s2, or None."""
    worlds = list(s2.worlds if worlds is None else worlds)
    b1 = [1 << s1.index[w] for w in worlds]
    b2 = [1 << s2.index[w] for w in worlds]
    m1, m2 = [0], [0]
    for x, y in zip(b1, b2):
        m1 += [m | x for m in m1]
        m2 += [m | y for m in m2]
    for a in range(len(m1)):
        for b in range(len(m1)):
            if s1.le_mask(m1[a], m1[b]) != s2.le_mask(m2[a], m2[b]):
                return (frozenset(worlds[k] for k in bits(a)),
                        frozenset(worlds[k] for k in bits(b)))
    return None


def _subsets(ws):
    ws = list(ws)
    return [frozenset(ws[k] for k in bits(m)) for m in range(1 << len(ws))]


def _family(rng, max_union):
    total = rng.randint(1, max_union)
    k = rng.randint(1, min(3, total))
    cuts = sorted(rng.sample(range(1, total), k - 1)) if k > 1 else []
    sizes = [b - a for a, b in zip([0, *cuts], [*cuts, total])]
    spaces, start = [], 0
    for j, size in enumerate(sizes):
        ws = [f"c{j}_{t}" for t in range(size)]
        spaces.append(random_small_space(ws, rng))
        start += size
    if rng.random() < 0.2:
        # leading components with empty universes
        spaces[:0] = [KappaSpace({}) for _ in range(rng.randint(1, 2))]
    return spaces


def check_plex_family(spaces, e=None):
    """All lex-sum properties on one family; returns None or (part, detail)."""
    S = lex_sum(spaces)
    laws = check_space_laws(S)
    if not laws:
        return "a", laws.witness
    if all(is_qualitative(s) for s in spaces) and not is_qualitative(S):
        return "b", is_qualitative(S).witness
    if all(is_ranking(s) for s in spaces) and not is_ranking(S):
        return "c", is_ranking(S).witness
    if e is not None:
        lhs = S.restrict(e)
        rhs = lex_sum([s.restrict(e) for s in spaces])
        bad = _same_order(lhs, rhs)
        if bad:
            return "d", [sorted(bad[0]), sorted(bad[1])]
    for s in spaces:
        bad = _same_order(S.restrict(s.worlds), s)
        if bad:
            return "e", [sorted(s.worlds), sorted(bad[0]), sorted(bad[1])]
    k = 0
    while k < len(spaces) - 1 and spaces[k].n == 0:
        k += 1
    if k:
        bad = _same_order(S, lex_sum(spaces[k:]))
        if bad:
            return "f", [sorted(bad[0]), sorted(bad[1])]
    perm = list(range(len(spaces)))
    random.Random(len(spaces)).shuffle(perm)
    T = lex_sum_set(spaces, perm)
    for s in spaces:
        bad = _same_order(T.restrict(s.worlds), s)
        if bad:
            return "otimes-a", [sorted(s.worlds), sorted(bad[0]), sorted(bad[1])]
    return None


def suite_plex(seed=0, families=200, max_union=8, **_):
    rng = random.Random(seed)
    dg = Digest()
    for k in range(families):
        spaces = _family(rng, max_union)
        union = [w for s in spaces for w in s.worlds]
        e = [w for w in union if rng.random() < 0.6]
        desc = [s.describe() for s in spaces]
        dg.add(json.dumps(desc, sort_keys=True))
        bad = check_plex_family(spaces, e)
        if bad:
            wit = {"kind": "check", "check": "plex", "spaces": desc, "restrict": e,
                   "part": bad[0], "detail": bad[1]}
            rep = Report("plex")
            rep.add(Record("plex", "lexsum-laws", seed, digest(wit), "counterexample", "valid",
                           k + 1, wit, {"families": families, "max_union": max_union}))
            return rep
    rep = Report("plex")
    rep.add(Record("plex", "lexsum-laws", seed, dg.hexdigest(), "valid", "valid", families,
                   None, {"families": families, "max_union": max_union}))
    return rep


# -- conditioning and time ---------------------------------------------------------

def check_cond(space, e):
    """COND: the restriction orders subsets of e exactly as the parent does."""
    r = space.restrict(e)
    return _same_order(r, space, r.worlds)


def check_local_change(I, i=1):
    """cmp at (r, m+1) equals cmp at (r, m) on the time predecessors."""
    for r in I.runs:
        for m in range(I.horizon):
            s1, s0 = I.space(r, m + 1, i), I.space(r, m, i)
            for a in _subsets(s1.worlds):
                pa = frozenset((q, t - 1) for q, t in a)
                for b in _subsets(s1.worlds):
                    pb = frozenset((q, t - 1) for q, t in b)
                    if s1.cmp(a, b) != s0.cmp(pa, pb):
                        return {"run": r, "time": m, "A": sorted(a), "B": sorted(b)}
    return None


def _system_stream(spec, count, seed):
    return ((("system", seed, k), I) for k, I in random_systems(spec, count, seed))


def _system_specs():
    return [SystemSpec(rank=True, shared=True), SystemSpec(rank=False, shared=True),
            SystemSpec(rank=True, shared=False), SystemSpec(rank=False, shared=False, full_support=False)]


def _mixed_systems(count, seed):
    specs = _system_specs()
    rng = random.Random(seed)
    for k in range(count):
        yield ("system", seed, k), random_system(specs[k % len(specs)], rng)


def suite_local_change(seed=0, systems=100, spaces=60, max_omega=6, **_):
    rep = Report("local_change")
    rng = random.Random(seed)
    dg = Digest()
    kinds = ("pref", "kappa", "poss", "table", "eps")
    bad_rec = None
    for k in range(spaces):
        kind = kinds[k % len(kinds)]
        n = rng.randint(0, max_omega)
        ws = [f"w{j}" for j in range(n)]
        s = random_small_space(ws, rng, kinds=(kind,))
        e = [w for w in ws if rng.random() < 0.7]
        dg.add((kind, json.dumps(s.describe(), sort_keys=True), e))
        bad = check_cond(s, e)
        if bad:
            wit = {"kind": "check", "check": "cond", "space": s.describe(), "restrict": e,
                   "sets": [sorted(bad[0]), sorted(bad[1])]}
            bad_rec = Record("local_change", "COND", seed, digest(wit), "counterexample",
                             "valid", k + 1, wit, {"spaces": spaces, "max_omega": max_omega})
            break
    rep.add(bad_rec or Record("local_change", "COND", seed, dg.hexdigest(), "valid", "valid",
                              spaces, None, {"spaces": spaces, "max_omega": max_omega}))
    dg = Digest()
    found = None
    count = 0
    for key, I in _mixed_systems(systems, seed):
        dg.add(key)
        count += 1
        assert is_synchronous(I) and has_perfect_recall(I)
        bad = check_local_change(I)
        if bad:
            found = {"kind": "check", "check": "local-change", "system": dump_system(I), **bad}
            break
    params = {"systems": systems}
    if found:
        rep.add(Record("local_change", "LOCAL-CHANGE", seed, digest(found), "counterexample",
                       "valid", count, found, params))
    else:
        rep.add(Record("local_change", "LOCAL-CHANGE", seed, dg.hexdigest(), "valid", "valid",
                       count, None, params))
    return rep


_BC_LEFT = compile_formula("psi ~>1 chi")
_BC_RIGHT = compile_formula("X (phi & psi) ~>1 X chi")
_COR_LEFT = compile_formula("B1 psi")
_COR_RIGHT = compile_formula("phi ~>1 psi")


def _characterizes(I, phi, r, m, i=1):
    fr = I.frame
    target = fr.know[i][I.index[(r, m + 1)]]
    for k in bits(fr.know[i][I.index[(r, m)]]):
        q, t = I.points[k]
        nk = I.index[(q, t + 1)]
        if (phi >> nk & 1) != (target >> nk & 1):
            return False
    return True


def check_bel_change(I, i=1):
    """Returns (fired, witness) for the belief-change biconditional."""
    fr = I.frame
    fired = 0
    for r in I.runs:
        for m in range(I.horizon):
            here, nxt = I.index[(r, m)], I.index[(r, m + 1)]
            runs = sorted({q for q, _ in fr.members(fr.know[i][here])}, key=I.run_index.get)
            pts = [I.index[(q, m + 1)] for q in runs]
            masks = [sum(1 << pts[k] for k in bits(s)) for s in range(1 << len(pts))]
            for phi in masks:
                if not _characterizes(I, phi, r, m, i):
                    continue
                fired += 1
                for psi in masks:
                    for chi in masks:
                        env = {"phi": phi, "psi": psi, "chi": chi}
                        lv, lu = _BC_LEFT(fr, env)
                        rv, ru = _BC_RIGHT(fr, env)
                        if (lv >> nxt & 1) != (rv >> here & 1):
                            return fired, {"run": r, "time": m, "phi": _pts(I, phi),
                                           "psi": _pts(I, psi), "chi": _pts(I, chi)}
    return fired, None


def check_static_corollary(I, i=1):
    """Static SDP systems: B psi at m+1 iff phi ~> psi at m, for run-level phi, psi."""
    fr = I.frame
    rows = [sum(1 << I.index[(r, t)] for t in range(I.horizon + 1)) for r in I.runs]
    masks = [sum(rows[k] for k in bits(s)) for s in range(1 << len(rows))]
    fired = 0
    for r in I.runs:
        for m in range(I.horizon):
            here, nxt = I.index[(r, m)], I.index[(r, m + 1)]
            for phi in masks:
                if not _characterizes(I, phi, r, m, i):
                    continue
                fired += 1
                for psi in masks:
                    env = {"phi": phi, "psi": psi}
                    lv, _ = _COR_LEFT(fr, env)
                    rv, _ = _COR_RIGHT(fr, env)
                    if (lv >> nxt & 1) != (rv >> here & 1):
                        return fired, {"run": r, "time": m, "phi": _pts(I, phi), "psi": _pts(I, psi)}
    return fired, None


def _pts(I, mask):
    return [list(p) for p in sorted(I.frame.members(mask), key=I.index.get)]


def suite_bel_change(seed=0, systems=100, **_):
    rep = Report("bel_change")
    for scheme, spec_list, checker in [
            ("BEL-CHANGE", _system_specs(), check_bel_change),
            ("STATIC-SDP-COROLLARY", [SystemSpec(static=True, shared=True, rank=True),
                                      SystemSpec(static=True, shared=True, rank=False)],
             check_static_corollary)]:
        rng = random.Random(seed)
        dg = Digest()
        fired_total = 0
        found = None
        for k in range(systems):
            I = random_system(spec_list[k % len(spec_list)], rng)
            dg.add(("system", seed, k))
            fired, bad = checker(I)
            fired_total += fired
            if bad:
                found = {"kind": "check", "check": scheme.lower(), "system": dump_system(I), **bad}
                break
        params = {"systems": systems, "fired": fired_total}
        if found:
            rep.add(Record("bel_change", scheme, seed, digest(found), "counterexample", "valid",
                           k + 1, found, params))
        else:
            rep.add(Record("bel_change", scheme, seed, dg.hexdigest(), "valid", "valid",
                           systems, None, params))
    return rep


def suite_batbon(seed=0, systems=150, search=3000, budget=60.0, **_):
    rep = Report("batbon")
    spec = SystemSpec(static=True, shared=True, rank=True, max_runs=5, max_horizon=3)
    for s in ("BT1", "BT2"):
        items = _system_stream(spec, systems, seed)
        rep.add(check_scheme_on("batbon", s, items, static_envs, seed=seed,
                                params={"systems": systems, "class": "sync,static,PRIOR,RANK,SDP,PR"}))
    # without RANK only BT2 breaks: a run minimal in the prior stays minimal in
    # whatever cell it later falls into, so BT1 survives partial-order priors
    norank = SystemSpec(static=True, shared=True, rank=False, max_runs=4, max_horizon=2)
    rep.add(check_scheme_on("batbon", "BT2", _system_stream(norank, search, seed + 1), static_envs,
                            expect="counterexample", seed=seed + 1,
                            params={"systems": search, "class": "-RANK"}, budget=budget))
    rep.add(check_scheme_on("batbon", "BT1", _system_stream(norank, systems, seed + 1), static_envs,
                            seed=seed + 1, params={"systems": systems, "class": "-RANK"}))
    return rep


def suite_coherence(seed=0, systems=100, **_):
    rep = Report("coherence")
    dg = Digest()
    found = None
    count = 0
    for key, I in _mixed_systems(systems, seed):
        dg.add(key)
        count += 1
        r = is_coherent(I)
        if not r:
            found = {"kind": "check", "check": "coherent", "system": dump_system(I),
                     "detail": r.witness}
            break
    if found:
        rep.add(Record("coherence", "COHERENT", seed, digest(found), "counterexample", "valid",
                       count, found, {"systems": systems}))
    else:
        rep.add(Record("coherence", "COHERENT", seed, dg.hexdigest(), "valid", "valid",
                       count, None, {"systems": systems}))
    rep.add(check_scheme_on("coherence", "COH", _mixed_systems(systems, seed), slice_envs,
                            seed=seed, params={"systems": systems}))
    I = load_system_fixture("incoherent.json")
    r = is_coherent(I)
    wit = None if r else {"kind": "check", "check": "coherent", "fixture": "incoherent.json",
                          "detail": r.witness}
    rep.add(Record("coherence", "COHERENT", None, digest(dump_system(I)),
                   "valid" if r else "counterexample", "counterexample", 1, wit,
                   {"fixture": "incoherent.json"}))
    rep.add(check_scheme_on("coherence", "COH", [("incoherent.json", I)], slice_envs,
                            expect="counterexample", params={"fixture": "incoherent.json"}))
    return rep


def load_system_fixture(name):
    from ..temporal import load_system
    return load_system(json.loads((FIXTURES / name).read_text()))


def suite_prior_prop(seed=0, systems=120, **_):
    """Conditions of the run-level prior structure carry over to the system."""
    rep = Report("prior_prop")
    conds = ("QUAL", "REF", "SDP", "UNIF", "RANK")
    held = {c: 0 for c in conds}
    dg = Digest()
    found = None
    for key, I in _mixed_systems(systems, seed):
        dg.add(key)
        Mr = run_structure(I)
        for c in conds:
            if check_condition(Mr, c):
                held[c] += 1
                r = check_condition(I, c)
                if not r:
                    found = {"kind": "check", "check": "prior-prop", "condition": c,
                             "system": dump_system(I), "detail": r.witness}
                    break
        if found:
            break
    if found:
        rep.add(Record("prior_prop", "PRIOR-PROP", seed, digest(found), "counterexample", "valid",
                       dg.count, found, {"systems": systems, "premise_held": held}))
    else:
        rep.add(Record("prior_prop", "PRIOR-PROP", seed, dg.hexdigest(), "valid", "valid",
                       dg.count, None, {"systems": systems, "premise_held": held}))
    return rep


# -- moses-shoham --------------------------------------------------------------

MS_TEMPLATES = ["B1 phi", "B1 (phi & !B1 psi)", "!B1 phi => B1 !B1 phi", "K1 (phi => B1 psi)",
                "B1 B1 phi", "B1 phi & B1 psi => B1 (phi & psi)", "B1 (phi | K1 psi)"]


def suite_moses_shoham(seed=0, random_count=120, random_worlds=4, max_worlds=3, **_):
    rep = Report("moses_shoham")
    alpha = Prop("alpha")
    pairs = [(t, to_text(moses_shoham(parse(t), alpha, 1))) for t in MS_TEMPLATES]
    compiled = [(t, compile_formula(t), s, compile_formula(s)) for t, s in pairs]
    dg = Digest()
    for key, M in _class_stream(("CONS", "SDP"), seed, max_worlds, random_count, random_worlds):
        dg.add(key)
        fr = M.frame
        a = 0
        for w, s in enumerate(fr.spaces[1]):
            mp = most_plausible_mask(s)
            if mp is not BOTTOM and mp is not UNDEFINED:
                a |= sum(1 << p for k, p in enumerate(fr.positions(s)) if mp >> k & 1)
        fr.props["alpha"] = a
        fr._memo.clear()
        for t, f, s, g in compiled:
            for env in all_envs(("phi", "psi"), range(fr.full + 1)):
                if f(fr, env)[0] != g(fr, env)[0]:
                    wit = {"kind": "check", "check": "moses-shoham", "structure": dump_structure(M),
                           "formula": t, "translated": s, "env": {k: sorted(fr.members(v))
                                                                  for k, v in env.items()}}
                    rep.add(Record("moses_shoham", "MS-REWRITE", seed, digest(wit), "counterexample",
                                   "valid", dg.count, wit))
                    return rep
    rep.add(Record("moses_shoham", "MS-REWRITE", seed, dg.hexdigest(), "valid", "valid", dg.count,
                   None, {"templates": MS_TEMPLATES}))
    return rep


# -- oracle cross-checks ---------------------------------------------------------

def suite_oracle_xcheck(seed=0, max_worlds=4, eps_worlds=6, eps_random=40, **_):
    rep = Report("oracle_xcheck")
    dg_lub, dg_lewis = Digest(), Digest()
    lub_bad = lewis_bad = None
    posets = 0
    for n in range(0, max_worlds + 1):
        ws = world_names(n)
        for below in labeled_posets(n):
            posets += 1
            s = PreferenceSpace.from_below(ws, below)
            t = free_lub_table(ws, below)
            dg_lub.add((n, below))
            dg_lewis.add((n, below))
            full = (1 << n) - 1
            if lub_bad is None:
                for a in range(full + 1):
                    for b in range(full + 1):
                        if s.le_mask(a, b) != t.le_mask(a, b):
                            lub_bad = {"kind": "check", "check": "free-lub", "space": s.describe(),
                                       "sets": [sorted(s.members(a)), sorted(s.members(b))]}
                            break
                    if lub_bad:
                        break
            if lewis_bad is None:
                M = KripkeStructure(ws, {}, {1: [ws]}, {1: {w: s for w in ws}}, agents=1,
                                    partition=True, s5=False)
                fr = M.frame
                for a in range(full + 1):
                    for b in range(full + 1):
                        v, _ = fr.op_cond(1, a, b)
                        got = bool(v & 1) if n else True
                        if n and got != lewis_conditional(s, a, b):
                            lewis_bad = {"kind": "check", "check": "lewis", "space": s.describe(),
                                         "phi": sorted(s.members(a)), "psi": sorted(s.members(b))}
                            break
                    if lewis_bad:
                        break
    for name, bad, dg in (("FREE-LUB", lub_bad, dg_lub), ("LEWIS-CLAUSE", lewis_bad, dg_lewis)):
        rep.add(Record("oracle_xcheck", name, None, digest(bad) if bad else dg.hexdigest(),
                       "counterexample" if bad else "valid", "valid", posets, bad,
                       {"max_worlds": max_worlds}))
    rep.add(_eps_check(seed, eps_worlds, eps_random))
    rep.add(_mp_check(seed))
    return rep


def _eps_vectors(seed, max_worlds, random_count):
    for n in range(0, 4):
        for vals in product([0, 1, 2, "inf"], repeat=n):
            yield list(vals)
    rng = random.Random(seed)
    for _ in range(random_count):
        n = rng.randint(4, max_worlds)
        yield [rng.choice([0, 1, 2, 3, "inf"]) for _ in range(n)]


def _eps_check(seed, max_worlds, random_count):
    dg = Digest()
    for vals in _eps_vectors(seed, max_worlds, random_count):
        dg.add(tuple(vals))
        ws = world_names(len(vals))
        e = EpsFamilySpace(dict(zip(ws, vals)), worlds=ws)
        k = KappaSpace(dict(zip(ws, vals)), worlds=ws)
        exps = e.values
        for a in range(1 << len(ws)):
            for b in range(1 << len(ws)):
                le = e.le_mask(a, b)
                if le != k.le_mask(a, b) or le != eps_le(exps, a, b):
                    wit = {"kind": "check", "check": "eps", "k": vals,
                           "sets": [sorted(e.members(a)), sorted(e.members(b))]}
                    return Record("oracle_xcheck", "EPS-KAPPA", seed, digest(wit), "counterexample",
                                  "valid", dg.count, wit)
    return Record("oracle_xcheck", "EPS-KAPPA", seed, dg.hexdigest(), "valid", "valid", dg.count,
                  None, {"max_worlds": max_worlds})


def _mp_check(seed, count=300):
    """Fast MP paths agree with the subset search on random qualitative spaces."""
    rng = random.Random(seed)
    dg = Digest()
    for k in range(count):
        ws = world_names(rng.randint(0, 5))
        s = random_small_space(ws, rng, kinds=("pref", "kappa", "poss", "eps"))
        dg.add(json.dumps(s.describe(), sort_keys=True))
        fast = most_plausible_mask(s)
        if s.is_bottom_mask(s.full):
            ok = fast is BOTTOM
        else:
            brute = mp_brute(s)
            ok = len(brute) == 1 and fast == brute[0]
        if not ok:
            wit = {"kind": "check", "check": "mp", "space": s.describe()}
            return Record("oracle_xcheck", "MP", seed, digest(wit), "counterexample", "valid",
                          k + 1, wit)
    return Record("oracle_xcheck", "MP", seed, dg.hexdigest(), "valid", "valid", count)


# -- registry --------------------------------------------------------------------

SUITES = {
    "klm": suite_klm, "kd45": suite_kd45, "kb": suite_kb, "cext": suite_cext,
    "plex": suite_plex, "local_change": suite_local_change, "bel_change": suite_bel_change,
    "batbon": suite_batbon, "coherence": suite_coherence, "prior_prop": suite_prior_prop,
    "moses_shoham": suite_moses_shoham, "oracle_xcheck": suite_oracle_xcheck,
}


def run_suite(name, **params):
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(**params)


def replay_check(w):
    """Re-run a non-formula check from its serialized inputs; True iff it still fails."""
    from ..temporal import load_system
    check = w["check"]
    if check == "plex":
        spaces = [space_from_json(d) for d in w["spaces"]]
        return check_plex_family(spaces, w.get("restrict")) is not None
    if check == "cond":
        return check_cond(space_from_json(w["space"]), w["restrict"]) is not None
    if check == "local-change":
        return check_local_change(load_system(w["system"])) is not None
    if check == "bel-change":
        return check_bel_change(load_system(w["system"]))[1] is not None
    if check == "static-sdp-corollary":
        return check_static_corollary(load_system(w["system"]))[1] is not None
    if check == "coherent":
        I = load_system_fixture(w["fixture"]) if "fixture" in w else load_system(w["system"])
        return not is_coherent(I)
    if check == "eps":
        ws = world_names(len(w["k"]))
        e = EpsFamilySpace(dict(zip(ws, w["k"])), worlds=ws)
        k = KappaSpace(dict(zip(ws, w["k"])), worlds=ws)
        a, b = (e.mask(x) for x in w["sets"])
        return e.le_mask(a, b) != k.le_mask(a, b) or e.le_mask(a, b) != eps_le(e.values, a, b)
    if check == "free-lub":
        s = space_from_json(w["space"])
        a, b = (s.mask(x) for x in w["sets"])
        t = free_lub_table(list(s.worlds), s.below)
        return s.le_mask(a, b) != t.le_mask(a, b)
    if check == "lewis":
        s = space_from_json(w["space"])
        a, b = s.mask(w["phi"]), s.mask(w["psi"])
        cond = s.is_bottom_mask(a) or s.gt_mask(a & b, a & ~b)
        return cond != lewis_conditional(s, a, b)
    raise ValueError(f"no replay for check {check!r}")
