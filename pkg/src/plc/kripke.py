"""Static Kripke structures with per-(world, agent) plausibility spaces."""
import json

from . import caps
from .common import Check, OK, bits
from .engine import Frame
from .errors import BadAgent, MPUndefined, OutOfUniverse, UnsupportedFormula
from .logic import Believe, Implies, Know, children, expand, has_next, parse, rebuild
from .plaus import (BOTTOM, UNDEFINED, empty_space, is_qualitative, is_ranking,
                    most_plausible_mask, same_space, space_from_json)

CONDITIONS = ("QUAL", "CONS", "NORM", "REF", "SDP", "UNIF", "RANK")

_EMPTY = empty_space()


class KripkeStructure:
    """(W, valuation, K_1..K_n, P_1..P_n).

    ``relations[i]`` may be a collection of pairs or a partition (list of
    blocks, pass ``partition=True``).  ``plaus[i][w]`` is the space of
    agent i at w; worlds without one get the empty space.  When ``s5`` is
    set every K_i must be an equivalence relation.
    """

    def __init__(self, worlds, props, relations, plaus=None, agents=None,
                 s5=True, partition=False, cap=None):
        worlds = tuple(worlds)
        if cap is not False:
            caps.enforce("worlds", len(worlds), "Kripke structure", cap)
        self.worlds = worlds
        self.index = {w: k for k, w in enumerate(worlds)}
        if len(self.index) != len(worlds):
            raise ValueError("duplicate worlds")
        n = len(worlds)
        self.agents = agents or max([*relations, *(plaus or {}), 1])
        pm = {}
        for name, ext in props.items():
            pm[name] = self._mask(ext)
        know = {}
        for i in range(1, self.agents + 1):
            rel = relations.get(i)
            if rel is None:
                know[i] = [(1 << n) - 1] * n
                continue
            ks = [0] * n
            if partition:
                for block in rel:
                    m = self._mask(block)
                    for k in bits(m):
                        ks[k] = m
            else:
                for a, b in rel:
                    ks[self._idx(a)] |= 1 << self._idx(b)
            know[i] = ks
        for i in relations:
            if not 1 <= i <= self.agents:
                raise BadAgent(f"relation for agent {i} but only {self.agents} agents")
        spaces = {}
        plaus = plaus or {}
        for i in range(1, self.agents + 1):
            row = plaus.get(i, {})
            lst = []
            for w in worlds:
                s = row.get(w, _EMPTY)
                for v in s.worlds:
                    if v not in self.index:
                        raise OutOfUniverse(f"space at ({w!r}, {i}) mentions foreign world {v!r}")
                lst.append(s)
            spaces[i] = lst
        self.frame = Frame(worlds, pm, self.agents, know, spaces)
        if s5:
            bad = self.s5_violation()
            if bad:
                raise ValueError(f"K_{bad[0]} is not an equivalence relation at {bad[1]!r}")

    def _idx(self, w):
        try:
            return self.index[w]
        except KeyError:
            raise OutOfUniverse(f"unknown world {w!r}") from None

    def _mask(self, ws):
        m = 0
        for w in ws:
            m |= 1 << self._idx(w)
        return m

    @property
    def props(self):
        return {k: self.frame.members(v) for k, v in self.frame.props.items()}

    def space(self, w, i):
        self._agent(i)
        return self.frame.spaces[i][self._idx(w)]

    def knows(self, w, i):
        self._agent(i)
        return self.frame.members(self.frame.know[i][self._idx(w)])

    def _agent(self, i):
        return self.frame.agent(i)

    def s5_violation(self):
        fr = self.frame
        for i in range(1, self.agents + 1):
            ks = fr.know[i]
            for w in range(fr.n):
                if not ks[w] >> w & 1:
                    return i, fr.labels[w]
                for v in bits(ks[w]):
                    if ks[v] != ks[w]:
                        return i, fr.labels[w]
        return None

    def __repr__(self):
        return f"<KripkeStructure {len(self.worlds)} worlds, {self.agents} agents>"


def _static(f):
    if isinstance(f, str):
        f = parse(f)
    if has_next(f):
        raise UnsupportedFormula("X is not available in static structures")
    return expand(f)


def eval_formula(M, w, f):
    """Truth of f at world w (B and N are expanded first)."""
    return M.frame.holds_at(M._idx(w), _static(f))


evaluate = eval_formula


def extension(M, f, w, i):
    """Worlds of Omega_(w,i) satisfying f."""
    s = M.space(w, i)
    v, _ = M.frame.ext(_static(f))
    return M.frame.members(v & M.frame.omega_mask(s))


def truth_set(M, f):
    v, _ = M.frame.ext(_static(f))
    return M.frame.members(v)


def valid_in(M, f):
    """Check whose witness is the first failing world in world order."""
    v, _ = M.frame.ext(_static(f))
    missing = M.frame.full & ~v
    if not missing:
        return OK
    return Check(False, {"world": M.worlds[next(bits(missing))]})


def check_condition(M, c, cap=None):
    """Verdict on one structural condition for all agents and worlds."""
    c = c.upper()
    fr = M.frame
    for i in range(1, M.agents + 1):
        spaces, ks = fr.spaces[i], fr.know[i]
        for w in range(fr.n):
            s = spaces[w]
            om = fr.omega_mask(s)
            wit = {"world": fr.labels[w], "agent": i}
            if c == "QUAL":
                r = is_qualitative(s, cap)
                if not r:
                    return Check(False, {**wit, **r.witness})
            elif c == "RANK":
                r = is_ranking(s, cap)
                if not r:
                    return Check(False, {**wit, **r.witness})
            elif c == "CONS":
                if om & ~ks[w]:
                    bad = fr.labels[next(bits(om & ~ks[w]))]
                    return Check(False, {**wit, "outside": bad})
            elif c == "NORM":
                if not s.is_normal():
                    return Check(False, wit)
            elif c == "REF":
                if not om >> w & 1:
                    return Check(False, {**wit, "reason": "world not in its own space"})
                # by monotonicity every superset of {w} is then above bottom too
                if s.is_bottom_mask(fr.local(s, 1 << w)):
                    return Check(False, {**wit, "reason": "own world is bottom"})
            elif c in ("SDP", "UNIF"):
                others = ks[w] if c == "SDP" else om
                for v in bits(others):
                    if not same_space(s, spaces[v], cap):
                        return Check(False, {**wit, "other": fr.labels[v]})
            else:
                raise ValueError(f"unknown condition {c!r}")
    return OK


def check_conditions(M, conds, cap=None):
    return {c: check_condition(M, c, cap) for c in conds}


def belief_masks(M, i):
    """Per-world masks of B_i(w) = union of MP(P_i(w')) over w' in K_i(w)."""
    fr = M.frame
    fr.agent(i)
    mp = []
    for w, s in enumerate(fr.spaces[i]):
        r = most_plausible_mask(s)
        if r is UNDEFINED:
            raise MPUndefined(fr.labels[w], i)
        mp.append(0 if r is BOTTOM else sum(1 << p for k, p in enumerate(fr.positions(s)) if r >> k & 1))
    out = []
    for w in range(fr.n):
        acc = 0
        for v in bits(fr.know[i][w]):
            acc |= mp[v]
        out.append(acc)
    return out


def belief_accessibility(M, i):
    return {M.worlds[w]: M.frame.members(m) for w, m in enumerate(belief_masks(M, i))}


def believes_via_relation(M, w, i, f):
    """B_i f evaluated through the belief relation instead of the expansion."""
    rel = belief_masks(M, i)[M._idx(w)]
    v, _ = M.frame.ext(_static(f))
    return not rel & ~v


def moses_shoham(f, alpha, agent=1):
    """Replace B_i psi by K_i(alpha => psi*) throughout f."""
    if isinstance(f, Believe) and f.agent == agent:
        return Know(agent, Implies(alpha, moses_shoham(f.sub, alpha, agent)))
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, [moses_shoham(k, alpha, agent) for k in kids])


# -- JSON ----------------------------------------------------------------

def load_structure(obj, s5=True, cap=None):
    if isinstance(obj, str):
        obj = json.loads(obj)
    worlds = list(obj["worlds"])
    agents = int(obj.get("agents", 1))
    props = {k: list(v) for k, v in obj.get("props", {}).items()}
    rel = {int(i): [tuple(p) for p in pairs] for i, pairs in obj.get("K", {}).items()}
    by_name = {str(w): w for w in worlds}
    plaus = {}
    for i, row in obj.get("P", {}).items():
        plaus[int(i)] = {by_name.get(w, w): space_from_json(spec) for w, spec in row.items()}
    return KripkeStructure(worlds, props, rel, plaus, agents=agents, s5=s5, cap=cap)


def dump_structure(M):
    fr = M.frame
    K = {}
    for i in range(1, M.agents + 1):
        K[str(i)] = [[fr.labels[w], fr.labels[v]] for w in range(fr.n) for v in bits(fr.know[i][w])]
    P = {}
    for i in range(1, M.agents + 1):
        row = {}
        for w in range(fr.n):
            s = fr.spaces[i][w]
            if s.n == 0 and s is _EMPTY:
                continue
            row[str(fr.labels[w])] = s.describe()
        P[str(i)] = row
    return {"worlds": list(fr.labels), "agents": M.agents,
            "props": {k: [fr.labels[w] for w in bits(v)] for k, v in sorted(fr.props.items())},
            "K": K, "P": P}


__all__ = ["KripkeStructure", "CONDITIONS", "eval_formula", "extension", "truth_set",
           "valid_in", "check_condition", "check_conditions", "belief_accessibility",
           "belief_masks", "believes_via_relation", "moses_shoham", "load_structure",
           "dump_structure", "evaluate"]
