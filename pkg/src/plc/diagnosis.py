"""Gate-level circuits, fault worlds and belief-based diagnosis.

A world fixes a set of faulty gates and a value for every line.  Working
gates obey their truth table; a faulty gate's output may take any value.
The diagnosing agent sees the observed lines only, and ranks worlds either
by the number of faults (``card``) or by inclusion of fault sets (``subset``).
"""
import json
import re
import warnings
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from itertools import combinations, product

from . import caps
from .common import bits
from .errors import CapExceeded
from .kripke import KripkeStructure, eval_formula
from .logic import Believe, Not, Prop, conj
from .plaus import KappaSpace, PreferenceSpace
from .temporal import InterpretedSystem, eval_t

KINDS = {
    "AND": lambda vs: all(vs),
    "OR": lambda vs: any(vs),
    "XOR": lambda vs: sum(vs) % 2 == 1,
    "NOT": lambda vs: not vs[0],
}
ORDERS = ("card", "subset")


@dataclass(frozen=True)
class Gate:
    name: str
    kind: str
    inputs: tuple
    output: str


@dataclass(frozen=True)
class Circuit:
    lines: tuple
    gates: tuple

    def __post_init__(self):
        known = set(self.lines)
        drivers = {}
        for g in self.gates:
            if g.kind not in KINDS:
                raise ValueError(f"gate {g.name}: unknown kind {g.kind}")
            if g.kind == "NOT" and len(g.inputs) != 1:
                raise ValueError(f"gate {g.name}: NOT takes one input")
            for line in (*g.inputs, g.output):
                if line not in known:
                    raise ValueError(f"gate {g.name}: unknown line {line}")
            if g.output in drivers:
                raise ValueError(f"line {g.output} driven by {drivers[g.output]} and {g.name}")
            drivers[g.output] = g.name
        if len({g.name for g in self.gates}) != len(self.gates):
            raise ValueError("duplicate gate names")
        by_out = {g.output: g for g in self.gates}
        ts = TopologicalSorter()
        for g in self.gates:
            ts.add(g.name, *(by_out[i].name for i in g.inputs if i in by_out))
        try:
            order = list(ts.static_order())
        except CycleError as e:
            raise ValueError(f"combinational cycle through {e.args[1]}") from None
        names = {g.name: g for g in self.gates}
        object.__setattr__(self, "topo", tuple(names[n] for n in order))

    @property
    def inputs(self):
        driven = {g.output for g in self.gates}
        return tuple(l for l in self.lines if l not in driven)

    @property
    def gate_names(self):
        return tuple(g.name for g in self.gates)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        gates = tuple(Gate(g["name"], g["kind"].upper(), tuple(g["in"]), g["out"])
                      for g in obj["gates"])
        return cls(tuple(obj["lines"]), gates)

    def to_json(self):
        return {"lines": list(self.lines),
                "gates": [{"name": g.name, "kind": g.kind, "in": list(g.inputs), "out": g.output}
                          for g in self.gates]}


FULL_ADDER = Circuit(
    tuple(f"l{k}" for k in range(1, 9)),
    (Gate("X1", "XOR", ("l1", "l2"), "l4"),
     Gate("X2", "XOR", ("l4", "l3"), "l7"),
     Gate("A1", "AND", ("l1", "l2"), "l5"),
     Gate("A2", "AND", ("l4", "l3"), "l6"),
     Gate("O1", "OR", ("l5", "l6"), "l8")),
)

BUILTIN = {"fulladder": FULL_ADDER}


def load_circuit(name_or_obj):
    if isinstance(name_or_obj, Circuit):
        return name_or_obj
    if isinstance(name_or_obj, str) and name_or_obj in BUILTIN:
        return BUILTIN[name_or_obj]
    return Circuit.from_json(name_or_obj)


@dataclass(frozen=True)
class DiagWorld:
    fault: frozenset
    values: tuple  # aligned with circuit.lines

    def value(self, circuit, line):
        return self.values[circuit.lines.index(line)]

    def label(self, circuit):
        f = ",".join(g for g in circuit.gate_names if g in self.fault) or "-"
        return f + "|" + "".join("1" if v else "0" for v in self.values)


_LIT = re.compile(r"\s*(!?)\s*hi\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\s*$")


def parse_observation(text, circuit=None):
    """'hi(l1),!hi(l2)' -> {'l1': True, 'l2': False}."""
    obs = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = _LIT.match(part)
        if not m:
            raise ValueError(f"bad observation literal {part!r}")
        line = m.group(2)
        if circuit is not None and line not in circuit.lines:
            raise ValueError(f"unknown line {line}")
        obs[line] = not m.group(1)
    return obs


def format_fault(f, circuit=None):
    names = sorted(f) if circuit is None else [g for g in circuit.gate_names if g in f]
    return "{" + ",".join(names) + "}"


def _fault_sets(circuit, max_faults):
    names = circuit.gate_names
    top = len(names) if max_faults is None else min(max_faults, len(names))
    for k in range(top + 1):
        for combo in combinations(names, k):
            yield frozenset(combo)


def _completions(circuit, fault, fixed=None):
    """All valid total assignments (dicts) for a fault set, optionally
    agreeing with a partial assignment ``fixed``."""
    fixed = fixed or {}
    free = list(circuit.inputs) + [g.output for g in circuit.gates if g.name in fault]
    choices = [(fixed[l],) if l in fixed else (False, True) for l in free]
    for combo in product(*choices):
        val = dict(zip(free, combo))
        ok = True
        for g in circuit.topo:
            if g.name in fault:
                continue
            out = KINDS[g.kind]([val[i] for i in g.inputs])
            if g.output in fixed and fixed[g.output] != out:
                ok = False
                break
            val[g.output] = out
        if ok:
            yield val


def enumerate_worlds(circuit, max_faults=None):
    """All valid worlds with at most ``max_faults`` faulty gates, canonical order:
    by fault count, then fault set in gate order, then line values."""
    caps.enforce("lines", len(circuit.lines), "circuit lines")
    out = []
    for f in _fault_sets(circuit, max_faults):
        ws = [DiagWorld(f, tuple(v[l] for l in circuit.lines)) for v in _completions(circuit, f)]
        ws.sort(key=lambda w: w.values)
        out.extend(ws)
    return out


def consistent(circuit, fault, obs):
    """Some valid world with this fault set agrees with the observation."""
    return next(_completions(circuit, frozenset(fault), obs), None) is not None


def diag_formula(circuit, fault):
    """Diag(f): exactly the gates of f are faulty."""
    return conj(Prop(f"faulty({g})") if g in fault else Not(Prop(f"faulty({g})"))
                for g in circuit.gate_names)


class DiagStructure(KripkeStructure):
    """Single-agent structure over fault worlds; knowledge = same observation."""

    def __init__(self, circuit, observed, order, max_faults=None):
        if order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")
        self.circuit, self.order = circuit, order
        self.observed = tuple(l for l in circuit.lines if l in set(observed))
        worlds = enumerate_worlds(circuit, max_faults)
        self.diag_worlds = {w.label(circuit): w for w in worlds}
        labels = list(self.diag_worlds)
        pos = [circuit.lines.index(l) for l in self.observed]
        cells = {}
        for lab, w in self.diag_worlds.items():
            cells.setdefault(tuple(w.values[p] for p in pos), []).append(lab)
        plaus = {}
        for key, members in cells.items():
            s = _cell_space([(lab, self.diag_worlds[lab].fault) for lab in members], order)
            for lab in members:
                plaus[lab] = s
        props = {f"faulty({g})": [lab for lab, w in self.diag_worlds.items() if g in w.fault]
                 for g in circuit.gate_names}
        for k, line in enumerate(circuit.lines):
            props[f"hi({line})"] = [lab for lab, w in self.diag_worlds.items() if w.values[k]]
        super().__init__(labels, props, {1: list(cells.values())}, {1: plaus},
                         agents=1, partition=True, cap=False)

    def world_for(self, obs):
        """First world (canonical order) agreeing with the observation."""
        for lab, w in self.diag_worlds.items():
            if all(w.value(self.circuit, l) == v for l, v in obs.items()):
                return lab
        return None


def _cell_space(members, order):
    if order == "card":
        return KappaSpace({lab: len(f) for lab, f in members})
    faults = dict(members)
    return PreferenceSpace.by_key(faults, faults.get, lambda x, y: x < y)


def build_structure(circuit, obs, order="card", max_faults=None):
    circuit = load_circuit(circuit)
    if isinstance(obs, str):
        obs = parse_observation(obs, circuit)
    return DiagStructure(circuit, obs, order, max_faults)


def bel_set(M, w):
    """Fault sets f with M,w |= !B1 !Diag(f)."""
    faults = []
    for dw in M.diag_worlds.values():
        if dw.fault not in faults:
            faults.append(dw.fault)
    bel = {f for f in faults
           if eval_formula(M, w, Not(Believe(1, Not(diag_formula(M.circuit, f)))))}
    if not bel:
        warnings.warn("no fault set explains the observation", stacklevel=2)
    return bel


def diagnose(circuit, obs, order="card", max_faults=None):
    """Bel for an observation; empty (with a warning) when nothing explains it."""
    M = build_structure(circuit, obs, order, max_faults)
    if isinstance(obs, str):
        obs = parse_observation(obs, M.circuit)
    w = M.world_for(obs)
    if w is None:
        warnings.warn("no fault set explains the observation", stacklevel=2)
        return set()
    return bel_set(M, w)


# -- diagnosis over time -----------------------------------------------------

def _obs_key(obs, lines):
    return tuple((l, obs[l]) for l in lines if l in obs)


def _alternatives(circuit, fault, test):
    """Possible observations for a test: inputs are set as in ``test``, the
    other tested lines take every value some valid world allows."""
    inputs = {l: v for l, v in test.items() if l in circuit.inputs}
    watched = [l for l in circuit.lines if l in test and l not in inputs]
    seen = []
    for val in _completions(circuit, fault, inputs):
        o = dict(inputs)
        o.update({l: val[l] for l in watched})
        key = _obs_key(o, circuit.lines)
        if key not in seen:
            seen.append(key)
    return [dict(k) for k in seen]


class DiagSystem(InterpretedSystem):
    """Runs = (fault set, one possible outcome per test).  Faults persist."""

    def __init__(self, circuit, obs_seq, order, max_faults=None, explicit=True):
        self.circuit, self.order = circuit, order
        self.obs_seq = [dict(o) for o in obs_seq]
        T = len(obs_seq) - 1
        if T < 0:
            raise ValueError("need at least one observation")
        runs, info = [], {}
        for f in _fault_sets(circuit, max_faults):
            alts = [_alternatives(circuit, f, test) for test in self.obs_seq]
            for outcome in product(*alts):
                rid = f"r{len(runs)}"
                runs.append(rid)
                info[rid] = (f, outcome)
                if len(runs) > caps.get("runs_built"):
                    raise CapExceeded("diagnosis runs", len(runs), caps.get("runs_built"))
        self.fault_of = {r: info[r][0] for r in runs}
        self.outcome_of = {r: info[r][1] for r in runs}
        lines = circuit.lines
        local = {1: {r: [tuple(_obs_key(o, lines) for o in info[r][1][:m + 1])
                         for m in range(T + 1)] for r in runs}}
        env = {r: [(tuple(sorted(info[r][0])), _obs_key(o, lines)) for o in info[r][1]]
               for r in runs}
        props = {}
        for g in circuit.gate_names:
            props[f"faulty({g})"] = [(r, m) for r in runs if g in info[r][0] for m in range(T + 1)]
        for l in lines:
            props[f"hi({l})"] = [(r, m) for r in runs for m in range(T + 1)
                                 if info[r][1][m].get(l) is True]
        prior = _cell_space([(r, info[r][0]) for r in runs], order)
        priors = {1: {r: prior for r in runs}}
        self.actual = next((r for r in runs
                            if all(_obs_key(info[r][1][m], lines) == _obs_key(self.obs_seq[m], lines)
                                   for m in range(T + 1))), None)
        super().__init__(runs, T, local, props, priors, None, env=env, agents=1)
        if explicit:
            self._install_explicit()

    def _install_explicit(self):
        """Point spaces built directly from the fault order on each knowledge cell."""
        fr = self.frame
        spaces, by_cell = [], {}
        for k, (r, m) in enumerate(self.points):
            cell = fr.know[1][k]
            s = by_cell.get(cell)
            if s is None:
                members = [(self.points[j], self.fault_of[self.points[j][0]]) for j in bits(cell)]
                s = by_cell[cell] = _cell_space(members, self.order)
            spaces.append(s)
        self.explicit = {1: dict(zip(self.points, spaces))}
        fr.spaces[1] = spaces
        fr._groups.clear()
        fr._memo.clear()

    def fault_sets(self):
        out = []
        for f in self.fault_of.values():
            if f not in out:
                out.append(f)
        return out


def build_system(circuit, obs_seq, order="card", max_faults=None):
    circuit = load_circuit(circuit)
    obs_seq = [parse_observation(o, circuit) if isinstance(o, str) else o for o in obs_seq]
    return DiagSystem(circuit, obs_seq, order, max_faults)


def bel_set_t(I, r, m):
    """Fault sets not disbelieved at (r, m)."""
    return {f for f in I.fault_sets()
            if eval_t(I, r, m, Not(Believe(1, Not(diag_formula(I.circuit, f)))))}


def observation_formula(circuit, obs):
    return conj(Prop(f"hi({l})") if v else Not(Prop(f"hi({l})"))
                for l, v in _obs_key(obs, circuit.lines))
