"""Deterministic generators for structures and systems in a condition class.

Exhaustive mode walks every structure up to renaming of worlds (knowledge
partitions are taken in one canonical labeling per block shape and the
remaining symmetric copies are skipped).  Random mode draws from a seeded
``random.Random``.  Either way each structure satisfies the requested
conditions by construction.
"""
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .. import caps
from ..common import bits
from ..kripke import KripkeStructure
from ..plaus import KappaSpace, PreferenceSpace
from ..temporal import InterpretedSystem
from .posets import labeled_posets, weak_orders

LOCAL = ("CONS", "NORM", "REF")
ALL_CONDITIONS = ("QUAL", "CONS", "NORM", "REF", "SDP", "UNIF", "RANK")


@dataclass(frozen=True)
class ClassSpec:
    """A class of structures: size bounds, propositions and required conditions.

    ``backend`` is "pref" (partial-order spaces), "kappa" (rankings) or
    "mixed"; RANK forces "kappa".  Every generated space is qualitative.
    """

    agents: int = 1
    max_worlds: int = 3
    min_worlds: int = 1
    props: tuple = ("p", "q")
    conditions: frozenset = field(default_factory=frozenset)
    backend: str = "pref"

    def __post_init__(self):
        conds = frozenset(c.upper() for c in self.conditions)
        bad = conds - set(ALL_CONDITIONS)
        if bad:
            raise ValueError(f"unknown conditions {sorted(bad)}")
        object.__setattr__(self, "conditions", conds)
        if self.backend not in ("pref", "kappa", "mixed"):
            raise ValueError(f"unknown backend {self.backend!r}")

    @property
    def space_backend(self):
        return "kappa" if "RANK" in self.conditions else self.backend

    def describe(self):
        return {"agents": self.agents, "max_worlds": self.max_worlds,
                "min_worlds": self.min_worlds, "props": list(self.props),
                "conditions": sorted(self.conditions), "backend": self.space_backend}


def world_names(n):
    return [f"w{k}" for k in range(n)]


# -- shared pieces -----------------------------------------------------------

def _owner_groups(cells, conds, n, rng=None):
    """Blocks of worlds that share one space object.

    SDP shares along knowledge cells; UNIF alone shares along an arbitrary
    partition (refined by the cells under CONS so that spaces can stay
    inside them).
    """
    if "SDP" in conds:
        return [list(c) for c in cells]
    if "UNIF" in conds:
        if rng is None:
            return [list(c) for c in cells]
        labels = [rng.randrange(n) for _ in range(n)]
        blocks = {}
        for w in range(n):
            key = labels[w]
            if "CONS" in conds:
                key = (key, _cell_of(cells, w))
            blocks.setdefault(key, []).append(w)
        return sorted(blocks.values())
    return [[w] for w in range(n)]


def _cell_of(cells, w):
    for k, c in enumerate(cells):
        if w in c:
            return k
    raise ValueError(w)


def _region(group, cells, conds, n):
    """(allowed, required) world masks for the universe of a group's space."""
    allowed = (1 << n) - 1
    if "CONS" in conds:
        for w in group:
            allowed &= sum(1 << v for v in cells[_cell_of(cells, w)])
    if "UNIF" in conds:
        allowed &= sum(1 << w for w in group)
    required = sum(1 << w for w in group) if "REF" in conds else 0
    if required & ~allowed:
        raise ValueError("conditions admit no universe for this group")
    return allowed, required


# -- exhaustive ----------------------------------------------------------------

class _SpaceCatalog:
    """All candidate spaces over subsets of n worlds, built once and shared."""

    def __init__(self, n, backend):
        self.n = n
        self.worlds = world_names(n)
        self.backend = backend
        self.items = []      # (omega mask, order key, space)
        self.by_key = {}
        for om in range(1 << n):
            members = list(bits(om))
            for order in self._orders(len(members)):
                key = (om, self._normal(members, order))
                if key in self.by_key:
                    continue
                self.by_key[key] = len(self.items)
                self.items.append((om, key[1], self._build(members, key[1])))

    def _orders(self, k):
        if self.backend in ("pref", "mixed"):
            yield from (("pref", p) for p in labeled_posets(k))
        if self.backend in ("kappa", "mixed"):
            for inf in range(1 << k):
                rest = [j for j in range(k) if not inf >> j & 1]
                for ranks in weak_orders(len(rest)):
                    vals = ["inf"] * k
                    for j, r in zip(rest, ranks):
                        vals[j] = r
                    yield ("kappa", tuple(vals))

    def _normal(self, members, order):
        # order keys are expressed over absolute world indices so that
        # permutations act on them directly
        kind, data = order
        if kind == "pref":
            return kind, tuple(sum(1 << members[j] for j in bits(m)) for m in data)
        return kind, tuple(data)

    def _build(self, members, order):
        kind, data = order
        ws = [self.worlds[k] for k in members]
        if kind == "pref":
            below = []
            for m in data:
                below.append(sum(1 << members.index(j) for j in bits(m)))
            return PreferenceSpace.from_below(ws, below)
        return KappaSpace(dict(zip(ws, data)), worlds=ws)

    def permuted(self, idx, perm):
        om, (kind, data) = self.items[idx][0], self.items[idx][1]
        new_om = sum(1 << perm[k] for k in bits(om))
        members = list(bits(om))
        if kind == "pref":
            pos = {perm[k]: sum(1 << perm[j] for j in bits(b)) for k, b in zip(members, data)}
            nd = tuple(pos[k] for k in sorted(pos))
        else:
            pos = {perm[k]: v for k, v in zip(members, data)}
            nd = tuple(pos[k] for k in sorted(pos))
        return self.by_key[(new_om, (kind, nd))]

    def candidates(self, allowed, required, norm, owners):
        out = []
        for idx, (om, (kind, data), s) in enumerate(self.items):
            if om & ~allowed or required & ~om:
                continue
            if norm and not s.is_normal():
                continue
            if required and kind == "kappa":
                members = list(bits(om))
                if any(data[members.index(w)] == "inf" for w in owners):
                    continue
            out.append(idx)
        return out


_CATALOGS = {}


def _catalog(n, backend):
    key = (n, backend)
    if key not in _CATALOGS:
        _CATALOGS[key] = _SpaceCatalog(n, backend)
    return _CATALOGS[key]


def _canonical_partitions(n):
    """One labeled partition per multiset of block sizes, blocks contiguous."""
    out = []

    def sizes(rest, largest):
        if rest == 0:
            yield []
            return
        for s in range(min(rest, largest), 0, -1):
            for tail in sizes(rest - s, s):
                yield [s, *tail]

    for shape in sizes(n, n):
        blocks, start = [], 0
        for s in shape:
            blocks.append(list(range(start, start + s)))
            start += s
        out.append(blocks)
    return out


def _automorphisms(cells, n):
    """Permutations of range(n) that map the partition onto itself."""
    target = sorted(map(frozenset, cells), key=sorted)
    out = []
    for perm in permutations(range(n)):
        img = sorted((frozenset(perm[w] for w in c) for c in cells), key=sorted)
        if img == target:
            out.append(perm)
    return out


def enumerate_structures(spec, valuation=None):
    """Every structure of the class with at most ``spec.max_worlds`` worlds, up to renaming.

    Single-agent only.  ``valuation`` maps each proposition to a world
    mask builder ``f(n) -> mask``; by default propositions are empty,
    which suits frame-mode scheme checks that range over all subsets.
    Yields (key, KripkeStructure) where key identifies the structure.
    """
    if spec.agents != 1:
        raise ValueError("exhaustive enumeration is single-agent")
    caps.enforce("enum", spec.max_worlds, "exhaustive structures", 4)
    conds = spec.conditions
    backend = spec.space_backend
    for n in range(spec.min_worlds, spec.max_worlds + 1):
        cat = _catalog(n, backend)
        worlds = cat.worlds
        for cells in _canonical_partitions(n):
            groups = _owner_groups(cells, conds, n)
            cands = []
            for g in groups:
                allowed, required = _region(g, cells, conds, n)
                cands.append(cat.candidates(allowed, required, "NORM" in conds, g))
            auts = _automorphisms(cells, n)
            owner = [0] * n
            for k, g in enumerate(groups):
                for w in g:
                    owner[w] = k
            for choice in product(*cands):
                per_world = tuple(choice[owner[w]] for w in range(n))
                if not _is_canonical(cat, per_world, auts, groups, conds, n):
                    continue
                if "UNIF" in conds and not _unif_ok(cat, per_world):
                    continue
                plaus = {1: {worlds[w]: cat.items[per_world[w]][2] for w in range(n)}}
                props = {}
                for name in spec.props:
                    fn = (valuation or {}).get(name)
                    m = fn(n) if fn else 0
                    props[name] = [worlds[k] for k in bits(m)]
                M = KripkeStructure(worlds, props, {1: [[worlds[w] for w in c] for c in cells]},
                                    plaus, agents=1, partition=True, s5=False)
                yield (n, tuple(map(tuple, cells)), per_world), M


def _is_canonical(cat, per_world, auts, groups, conds, n):
    for perm in auts[1:]:
        img = [None] * n
        for w in range(n):
            img[perm[w]] = cat.permuted(per_world[w], perm)
        img = tuple(img)
        if img < per_world:
            return False
    return True


def _unif_ok(cat, per_world):
    for w, idx in enumerate(per_world):
        for v in bits(cat.items[idx][0]):
            if per_world[v] != idx:
                return False
    return True


# -- random ------------------------------------------------------------------

def random_poset_space(ws, rng, density=0.5):
    order = list(ws)
    rng.shuffle(order)
    prec = [(a, b) for a, b in combinations(order, 2) if rng.random() < density]
    return PreferenceSpace(list(ws), prec)


def random_kappa_space(ws, rng, finite=(), allow_inf=True, top=3):
    vals = {}
    for w in ws:
        if allow_inf and w not in finite and rng.random() < 0.15:
            vals[w] = "inf"
        else:
            vals[w] = rng.randint(0, top)
    return KappaSpace(vals, worlds=list(ws))


def random_space(ws, rng, backend, norm=False, finite=()):
    ws = list(ws)
    if backend == "mixed":
        backend = rng.choice(("pref", "kappa"))
    if backend == "pref":
        return random_poset_space(ws, rng)
    s = random_kappa_space(ws, rng, finite=finite)
    if norm and ws and not s.is_normal():
        vm = s.value_map()
        vm[rng.choice(ws)] = 0
        s = KappaSpace(vm, worlds=ws)
    return s


def _random_partition(n, rng):
    labels = [rng.randrange(n) for _ in range(n)]
    blocks = {}
    for w, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(w)
    return sorted(blocks.values())


def random_structure(spec, rng):
    """One random structure of the class."""
    n = rng.randint(spec.min_worlds, spec.max_worlds)
    worlds = world_names(n)
    conds = spec.conditions
    rel, plaus = {}, {}
    props = {p: [w for w in worlds if rng.random() < 0.5] for p in spec.props}
    for i in range(1, spec.agents + 1):
        cells = _random_partition(n, rng)
        rel[i] = [[worlds[w] for w in c] for c in cells]
        row = {}
        for g in _owner_groups(cells, conds, n, rng):
            allowed, required = _region(g, cells, conds, n)
            om = required
            for v in bits(allowed & ~required):
                if rng.random() < 0.6:
                    om |= 1 << v
            if "NORM" in conds and not om:
                om = 1 << rng.choice(list(bits(allowed)))
            ws = [worlds[k] for k in bits(om)]
            finite = [worlds[w] for w in g] if "REF" in conds else ()
            s = random_space(ws, rng, spec.space_backend, "NORM" in conds, finite)
            for w in g:
                row[worlds[w]] = s
        plaus[i] = row
    return KripkeStructure(worlds, props, rel, plaus, agents=spec.agents, partition=True)


def random_structures(spec, count, seed):
    rng = random.Random(seed)
    for k in range(count):
        yield k, random_structure(spec, rng)


# -- systems -----------------------------------------------------------------

@dataclass(frozen=True)
class SystemSpec:
    """Synchronous perfect-recall systems whose spaces come from priors.

    ``rank`` picks kappa priors (else partial-order priors); ``shared``
    gives every run the same prior, which makes the system SDP and UNIF;
    ``static`` keeps every proposition constant along each run.
    """

    max_runs: int = 4
    max_horizon: int = 3
    props: tuple = ("p", "q")
    rank: bool = True
    shared: bool = True
    static: bool = False
    alphabet: int = 2
    agents: int = 1
    full_support: bool = True

    def describe(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def random_system(spec, rng):
    k = rng.randint(1, spec.max_runs)
    T = rng.randint(1, spec.max_horizon)
    runs = [f"r{j}" for j in range(k)]
    local, priors = {}, {}
    for i in range(1, spec.agents + 1):
        obs = {r: [rng.randrange(spec.alphabet) for _ in range(T + 1)] for r in runs}
        local[i] = {r: [list(obs[r][:m + 1]) for m in range(T + 1)] for r in runs}
        backend = "kappa" if spec.rank else "pref"

        def prior():
            support = runs if spec.full_support else [r for r in runs if rng.random() < 0.8]
            return random_space(support, rng, backend, norm=True, finite=support)

        if spec.shared:
            p = prior()
            priors[i] = {r: p for r in runs}
        else:
            priors[i] = {r: prior() for r in runs}
    props = {}
    for name in spec.props:
        if spec.static:
            on = [r for r in runs if rng.random() < 0.5]
            props[name] = [(r, m) for r in on for m in range(T + 1)]
        else:
            props[name] = [(r, m) for r in runs for m in range(T + 1) if rng.random() < 0.5]
    return InterpretedSystem(runs, T, local, props, priors, agents=spec.agents)


def random_systems(spec, count, seed):
    rng = random.Random(seed)
    for k in range(count):
        yield k, random_system(spec, rng)

