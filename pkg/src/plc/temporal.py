"""Interpreted plausibility systems over finite runs.

Points are (run, time) pairs with 0 <= time <= horizon.  Agent i cannot
tell two points apart when its local states there are equal.  Plausibility
spaces at points are either given explicitly or obtained from per-run
priors by the time-m projection.
"""
import json
from itertools import combinations

from . import caps
from .common import Check, OK, bits
from .engine import Frame
from .errors import NoPrior, NotSynchronous, OutOfUniverse
from .kripke import KripkeStructure
from .logic import expand, parse
from .plaus import empty_space, same_space, space_from_json

_EMPTY = empty_space()


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    if isinstance(x, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in x.items()))
    return x


class InterpretedSystem:
    """Finite runs with local states, a valuation over points and plausibility.

    ``local[i][r]`` is the list of agent i's local states along run r;
    ``props`` maps names to collections of points; ``priors[i][r]`` is a
    space over runs; ``plaus[i][point]`` an explicit space over points.
    """

    def __init__(self, runs, horizon, local, props, priors=None, plaus=None,
                 env=None, agents=None):
        self.runs = tuple(runs)
        self.run_index = {r: k for k, r in enumerate(self.runs)}
        self.horizon = T = int(horizon)
        self.agents = agents or max([*local, 1])
        self.env = env or {}
        self.points = tuple((r, m) for r in self.runs for m in range(T + 1))
        self.worlds = self.points
        self.index = {p: k for k, p in enumerate(self.points)}
        self.local = {}
        for i in range(1, self.agents + 1):
            row = local.get(i, {})
            self.local[i] = {}
            for r in self.runs:
                states = row.get(r, [None] * (T + 1))
                if len(states) != T + 1:
                    raise ValueError(f"run {r!r}: agent {i} needs {T + 1} local states")
                self.local[i][r] = tuple(_freeze(s) for s in states)
        pm = {}
        for name, pts in props.items():
            m = 0
            for p in pts:
                m |= 1 << self._pidx(tuple(p))
            pm[name] = m
        self.priors = priors or {}
        self.explicit = plaus or {}
        know = {}
        for i in range(1, self.agents + 1):
            groups = {}
            for k, (r, m) in enumerate(self.points):
                key = self.local[i][r][m]
                groups[key] = groups.get(key, 0) | (1 << k)
            know[i] = [groups[self.local[i][r][m]] for (r, m) in self.points]
        succ = [k + 1 if m < T else -1 for k, (r, m) in enumerate(self.points)]
        self.frame = Frame(self.points, pm, self.agents, know, {}, succ)
        self._proj = {}
        for i in range(1, self.agents + 1):
            self.frame.spaces[i] = [self._space_at(p, i) for p in self.points]

    def _pidx(self, p):
        try:
            return self.index[p]
        except KeyError:
            raise OutOfUniverse(f"unknown point {p!r}") from None

    def _space_at(self, p, i):
        if i in self.explicit:
            return self.explicit[i].get(p, _EMPTY)
        if i in self.priors:
            return project_prior(self, p[0], p[1], i)
        return _EMPTY

    def space(self, r, m, i):
        self.frame.agent(i)
        return self.frame.spaces[i][self._pidx((r, m))]

    def knows(self, r, m, i):
        self.frame.agent(i)
        return self.frame.members(self.frame.know[i][self._pidx((r, m))])

    def same_state(self, p, q, i):
        return self.local[i][p[0]][p[1]] == self.local[i][q[0]][q[1]]

    def __repr__(self):
        return f"<InterpretedSystem {len(self.runs)} runs, horizon {self.horizon}>"


def runs_of(points):
    """R(A): runs that pass through A."""
    return {r for r, _ in points}


def prev(I, A):
    return frozenset((r, m - 1) for r, m in A if m >= 1)


def eval_t(I, r, m, f):
    if isinstance(f, str):
        f = parse(f)
    return I.frame.holds_at(I._pidx((r, m)), expand(f))


def point_set(I, f):
    """Points where f is true and defined."""
    if isinstance(f, str):
        f = parse(f)
    v, _ = I.frame.ext(expand(f))
    return I.frame.members(v)


# -- structural conditions -------------------------------------------------

def is_synchronous(I):
    for i in range(1, I.agents + 1):
        seen = {}
        for r, m in I.points:
            key = I.local[i][r][m]
            other = seen.setdefault(key, (r, m))
            if other[1] != m:
                return Check(False, {"agent": i, "points": [list(other), [r, m]]})
    return OK


def has_perfect_recall(I):
    for i in range(1, I.agents + 1):
        loc = I.local[i]
        for m in range(I.horizon):
            seen = {}
            for r in I.runs:
                key = loc[r][m + 1]
                r0 = seen.setdefault(key, r)
                if loc[r0][m] != loc[r][m]:
                    return Check(False, {"agent": i, "runs": [r0, r], "time": m})
    return OK


def is_static(I):
    fr = I.frame
    for name, mask in sorted(fr.props.items()):
        for r in I.runs:
            base = mask >> I.index[(r, 0)] & 1
            for m in range(1, I.horizon + 1):
                if (mask >> I.index[(r, m)] & 1) != base:
                    return Check(False, {"run": r, "time": m, "prop": name})
    return OK


def project_prior(I, r, m, i):
    """Time-m projection of the prior of (r, i) onto K_i(r, m)."""
    prior = I.priors.get(i, {}).get(r)
    if prior is None:
        raise NoPrior(f"no prior for run {r!r}, agent {i}")
    kmask = I.frame.know[i][I._pidx((r, m))]
    key = (id(prior), kmask)
    s = I._proj.get(key)
    if s is None:
        cell = [I.points[k] for k in bits(kmask)]
        if any(t != m for _, t in cell):
            raise NotSynchronous(f"K_{i}({r!r},{m}) spans several times")
        runs = [q for q, _ in cell if q in prior.index]
        s = prior.restrict(runs).relabel({q: (q, m) for q in runs})
        I._proj[key] = s
    return s


def satisfies_prior(I, cap=None):
    for i in range(1, I.agents + 1):
        if i not in I.priors:
            raise NoPrior(f"no priors for agent {i}")
        if i not in I.explicit:
            continue  # spaces are the projections themselves
        seen = set()
        for r, m in I.points:
            s, p = I.space(r, m, i), project_prior(I, r, m, i)
            if (id(s), id(p)) in seen:
                continue
            if not same_space(s, p, cap):
                return Check(False, {"run": r, "time": m, "agent": i})
            seen.add((id(s), id(p)))
    return OK


def _require_sync(I):
    s = is_synchronous(I)
    if not s:
        raise NotSynchronous(f"system is not synchronous: {s.witness}")


def is_coherent(I):
    """Sets of runs implausible at time m stay implausible at m+1."""
    _require_sync(I)
    caps.enforce("runs", len(I.runs), "coherence run subsets")
    fr = I.frame
    for i in range(1, I.agents + 1):
        for r in I.runs:
            for m in range(I.horizon):
                s0, s1 = I.space(r, m, i), I.space(r, m + 1, i)
                on0 = {pt[0]: pt for pt in s0.worlds}
                on1 = {pt[0]: pt for pt in s1.worlds}
                relevant = sorted(set(on0) | set(on1), key=I.run_index.get)
                for k in range(len(relevant) + 1):
                    for R in combinations(relevant, k):
                        a0 = s0.mask([on0[q] for q in R if q in on0])
                        if not s0.is_bottom_mask(a0):
                            continue
                        a1 = s1.mask([on1[q] for q in R if q in on1])
                        if not s1.is_bottom_mask(a1):
                            return Check(False, {"run": r, "time": m, "agent": i, "R": list(R)})
    return OK


def satisfies_persist(I, cap=None):
    _require_sync(I)
    for i in range(1, I.agents + 1):
        for m in range(I.horizon):
            for a, b in combinations(I.runs, 2):
                if not I.same_state((a, m + 1), (b, m + 1), i):
                    continue
                now = same_space(I.space(a, m + 1, i), I.space(b, m + 1, i), cap)
                before = same_space(I.space(a, m, i), I.space(b, m, i), cap)
                if now != before:
                    return Check(False, {"agent": i, "time": m, "runs": [a, b]})
    return OK


def characterizes_knowledge(I, phi, r, m, i):
    """For (r',m) in K_i(r,m): (r',m+1) satisfies phi iff (r',m+1) in K_i(r,m+1)."""
    if isinstance(phi, str):
        phi = parse(phi)
    fr = I.frame
    v, u = fr.ext(expand(phi))
    target = fr.know[i][I.index[(r, m + 1)]]
    for k in bits(fr.know[i][I.index[(r, m)]]):
        q, t = I.points[k]
        if t + 1 > I.horizon:
            return False
        nk = I.index[(q, t + 1)]
        if u >> nk & 1:
            return False
        if bool(v >> nk & 1) != bool(target >> nk & 1):
            return False
    return True


def run_structure(I, i=None):
    """Run-level structure: worlds are runs, knowledge is total, spaces are priors."""
    agents = range(1, I.agents + 1) if i is None else [i]
    rel = {a: [I.runs] for a in agents}
    plaus = {a: dict(I.priors.get(a, {})) for a in agents}
    return KripkeStructure(I.runs, {}, rel, plaus, agents=I.agents, partition=True, cap=False)


# -- JSON ----------------------------------------------------------------

def _point_name(p):
    return f"{p[0]}:{p[1]}"


def _point_of(name):
    r, _, m = str(name).rpartition(":")
    return r, int(m)


def load_system(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    T = int(obj["horizon"])
    runs = list(obj["runs"])
    local, env = {}, {}
    agents = int(obj.get("agents", 0)) or None
    for r, data in obj["runs"].items():
        env[r] = [_freeze(s) for s in data.get("env", [])]
        for i, states in data.get("local", {}).items():
            local.setdefault(int(i), {})[r] = states
    props = {k: [(p[0], int(p[1])) for p in v] for k, v in obj.get("props", {}).items()}
    priors = {}
    for i, row in obj.get("priors", {}).items():
        priors[int(i)] = {r: space_from_json(spec) for r, spec in row.items()}
    plaus = {}
    for i, row in (obj.get("plaus") or {}).items():
        plaus[int(i)] = {_point_of(p): space_from_json(spec, decode=_point_of)
                         for p, spec in row.items()}
    return InterpretedSystem(runs, T, local, props, priors or None, plaus or None,
                             env=env, agents=agents)


def _describe_points(s):
    d = s.describe()
    d["omega"] = [_point_name(p) for p in s.worlds]
    for field in ("kappa", "k", "poss"):
        if field in d:
            d[field] = {_point_name(p): v for p, v in zip(s.worlds, d[field].values())}
    if "prec" in d:
        d["prec"] = [[_point_name(a), _point_name(b)] for a, b in s.prec_pairs()]
    if "value" in d:
        names = {str(w): _point_name(w) for w in s.worlds}
        d["value"] = {",".join(names[x] for x in k.split(",") if x): v for k, v in d["value"].items()}
    return d


def _thaw(x):
    if isinstance(x, tuple):
        return [_thaw(v) for v in x]
    return x


def dump_system(I, explicit=None):
    """JSON form; explicit per-point spaces are written when present (or forced)."""
    out = {"horizon": I.horizon, "agents": I.agents, "runs": {}, "props": {}}
    for r in I.runs:
        out["runs"][r] = {"env": [_thaw(s) for s in I.env.get(r, [])],
                          "local": {str(i): [_thaw(s) for s in I.local[i][r]]
                                    for i in range(1, I.agents + 1)}}
    for name, mask in sorted(I.frame.props.items()):
        out["props"][name] = [[r, m] for r, m in I.frame.members(mask)]
        out["props"][name].sort(key=lambda p: I.index[tuple(p)])
    if I.priors:
        out["priors"] = {str(i): {r: s.describe() for r, s in row.items()}
                         for i, row in I.priors.items()}
    write_explicit = I.explicit if explicit is None else explicit
    if write_explicit:
        out["plaus"] = {str(i): {_point_name(p): _describe_points(I.space(p[0], p[1], i))
                                 for p in I.points if I.space(p[0], p[1], i).n}
                        for i in range(1, I.agents + 1)}
    return out


__all__ = ["InterpretedSystem", "eval_t", "point_set", "prev", "runs_of",
           "is_synchronous", "has_perfect_recall", "is_static", "project_prior",
           "satisfies_prior", "is_coherent", "satisfies_persist",
           "characterizes_knowledge", "run_structure", "load_system", "dump_system"]
