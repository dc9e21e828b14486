"""Plausibility spaces over finite universes.

A space only answers one question: is Pl(A) <= Pl(B)?  Everything else
(strict order, equality, bottom tests) is derived from that.  Subsets are
handled internally as int bitmasks over the space's own world order; the
public methods accept any iterable of world labels.
"""
import enum
import math
from fractions import Fraction

from ..common import bits
from ..errors import OutOfUniverse

INF = math.inf


class Cmp(enum.Enum):
    LESS = "<"
    EQUAL = "="
    GREATER = ">"
    INCOMPARABLE = "||"

    def flip(self):
        return _FLIP[self]


_FLIP = {Cmp.LESS: Cmp.GREATER, Cmp.GREATER: Cmp.LESS,
         Cmp.EQUAL: Cmp.EQUAL, Cmp.INCOMPARABLE: Cmp.INCOMPARABLE}


class PlausSpace:
    """Base class. Subclasses implement ``_le(a, b)`` on local masks."""

    backend = "abstract"

    def __init__(self, worlds):
        worlds = tuple(worlds)
        index = {w: i for i, w in enumerate(worlds)}
        if len(index) != len(worlds):
            raise ValueError("duplicate worlds in universe")
        self.worlds = worlds
        self.index = index
        self.n = len(worlds)
        self.full = (1 << self.n) - 1
        self._cache = {}

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"<{type(self).__name__} over {list(self.worlds)}>"

    # -- subsets ---------------------------------------------------------
    def mask(self, ws):
        if isinstance(ws, int) and not isinstance(ws, bool):
            raise TypeError("pass world labels, not a raw mask")
        m = 0
        for w in ws:
            try:
                m |= 1 << self.index[w]
            except KeyError:
                raise OutOfUniverse(f"world {w!r} is not in the universe") from None
        return m

    def members(self, m):
        return frozenset(self.worlds[i] for i in bits(m))

    # -- order on masks --------------------------------------------------
    def le_mask(self, a, b):
        key = (a, b)
        r = self._cache.get(key)
        if r is None:
            r = self._cache[key] = bool(self._le(a, b))
        return r

    def _le(self, a, b):
        raise NotImplementedError

    def cmp_mask(self, a, b):
        ab, ba = self.le_mask(a, b), self.le_mask(b, a)
        if ab and ba:
            return Cmp.EQUAL
        if ab:
            return Cmp.LESS
        if ba:
            return Cmp.GREATER
        return Cmp.INCOMPARABLE

    def gt_mask(self, a, b):
        return self.le_mask(b, a) and not self.le_mask(a, b)

    def is_bottom_mask(self, a):
        return self.le_mask(a, 0)

    # -- label-level API -------------------------------------------------
    def cmp(self, a, b):
        return self.cmp_mask(self.mask(a), self.mask(b))

    def le(self, a, b):
        return self.le_mask(self.mask(a), self.mask(b))

    def gt(self, a, b):
        return self.gt_mask(self.mask(a), self.mask(b))

    def is_bottom(self, a):
        return self.is_bottom_mask(self.mask(a))

    def is_normal(self):
        """True iff top is strictly above bottom."""
        return not self.le_mask(self.full, 0)

    # -- derived spaces --------------------------------------------------
    def restrict(self, e):
        """Condition on ``e``: universe becomes the worlds of Ω in e."""
        e = set(e)
        keep = [w for w in self.worlds if w in e]
        return self._restricted(keep)

    def _restricted(self, keep):
        return RestrictedSpace(self, keep)

    def relabel(self, mapping):
        """Same order, worlds renamed by an injective mapping."""
        return RelabeledSpace(self, [mapping[w] for w in self.worlds])

    def describe(self):
        """JSON-able description; raises for procedural backends."""
        raise TypeError(f"{self.backend} spaces have no finite description")


class PreferenceSpace(PlausSpace):
    """Plausibility induced by a strict partial order ``prec``.

    ``(a, b)`` in prec means a is preferred to b.  The given pairs are
    closed transitively; a cycle is rejected.  Pl(A) <= Pl(B) iff every
    a in A is dominated by some b in B with b preceding-or-equal a.
    """

    backend = "pref"

    def __init__(self, worlds, prec=()):
        super().__init__(worlds)
        n = self.n
        below = [0] * n  # below[i]: worlds strictly preferred to i
        for a, b in prec:
            ia, ib = self._idx(a), self._idx(b)
            below[ib] |= 1 << ia
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = below[i]
                for j in bits(below[i]):
                    acc |= below[j]
                if acc != below[i]:
                    below[i] = acc
                    changed = True
        for i in range(n):
            if below[i] >> i & 1:
                raise ValueError("preference relation has a cycle")
        self.below = tuple(below)
        self.down = tuple(below[i] | (1 << i) for i in range(n))

    @classmethod
    def from_below(cls, worlds, below):
        """Build from already transitive masks: below[i] = worlds preferred to i."""
        self = cls.__new__(cls)
        PlausSpace.__init__(self, worlds)
        for i, m in enumerate(below):
            if m >> i & 1:
                raise ValueError("preference relation has a cycle")
        self.below = tuple(below)
        self.down = tuple(m | (1 << i) for i, m in enumerate(below))
        return self

    @classmethod
    def by_key(cls, worlds, key, less):
        """Order worlds by ``less`` on ``key(w)``; ``less`` must be a strict order."""
        worlds = list(worlds)
        groups = {}
        for i, w in enumerate(worlds):
            k = key(w)
            groups[k] = groups.get(k, 0) | (1 << i)
        below_of = {k: sum(m for k2, m in groups.items() if less(k2, k)) for k in groups}
        return cls.from_below(worlds, [below_of[key(w)] for w in worlds])

    def _idx(self, w):
        try:
            return self.index[w]
        except KeyError:
            raise OutOfUniverse(f"world {w!r} is not in the universe") from None

    def _le(self, a, b):
        down = self.down
        for i in bits(a):
            if not down[i] & b:
                return False
        return True

    def prec_pairs(self):
        return [(self.worlds[j], self.worlds[i])
                for i in range(self.n) for j in bits(self.below[i])]

    def precedes(self, a, b):
        return bool(self.below[self.index[b]] >> self.index[a] & 1)

    def minimal_mask(self, m):
        return sum(1 << i for i in bits(m) if not self.below[i] & m)

    def _restricted(self, keep):
        pos = [self.index[w] for w in keep]
        sel = sum(1 << p for p in pos)
        new = {q: k for k, q in enumerate(pos)}
        below = [sum(1 << new[q] for q in bits(self.below[p] & sel)) for p in pos]
        return PreferenceSpace.from_below(keep, below)

    def relabel(self, mapping):
        return PreferenceSpace([mapping[w] for w in self.worlds],
                               [(mapping[a], mapping[b]) for a, b in self.prec_pairs()])

    def describe(self):
        return {"backend": "pref", "omega": list(self.worlds),
                "prec": sorted([list(p) for p in self.prec_pairs()], key=_sortkey)}


class _RankedSpace(PlausSpace):
    """Shared machinery for spaces given by a value per world."""

    def __init__(self, values, worlds=None):
        if worlds is None:
            worlds = list(values)
        super().__init__(worlds)
        missing = [w for w in self.worlds if w not in values]
        if missing:
            raise ValueError(f"no value for worlds {missing}")
        extra = [w for w in values if w not in self.index]
        if extra:
            raise OutOfUniverse(f"values given for foreign worlds {extra}")
        self.values = tuple(self._coerce(values[w]) for w in self.worlds)

    def _coerce(self, v):
        return v

    def value_map(self):
        return dict(zip(self.worlds, self.values))

    def _restricted(self, keep):
        vm = self.value_map()
        return type(self)({w: vm[w] for w in keep}, worlds=keep)

    def relabel(self, mapping):
        return type(self)({mapping[w]: v for w, v in zip(self.worlds, self.values)},
                          worlds=[mapping[w] for w in self.worlds])


def _coerce_kappa(v):
    if v is None or v == "inf" or v == INF:
        return INF
    if isinstance(v, bool) or int(v) != v or v < 0:
        raise ValueError(f"kappa values are naturals or inf, got {v!r}")
    return int(v)


class KappaSpace(_RankedSpace):
    """Ordinal ranking: kappa(A) = min over A, kappa(empty) = inf.

    Lower rank means more plausible, so Pl(A) <= Pl(B) iff kappa(A) >= kappa(B).
    """

    backend = "kappa"

    def _coerce(self, v):
        return _coerce_kappa(v)

    def rank(self, m):
        vals = self.values
        return min((vals[i] for i in bits(m)), default=INF)

    def _le(self, a, b):
        return self.rank(a) >= self.rank(b)

    def describe(self):
        return {"backend": "kappa", "omega": list(self.worlds),
                "kappa": {_key(w): (None if v == INF else v)
                          for w, v in zip(self.worlds, self.values)}}


class PossibilitySpace(_RankedSpace):
    """Possibility measure: Poss(A) = max over A, Poss(empty) = 0."""

    backend = "poss"

    def _coerce(self, v):
        f = Fraction(v)
        if not 0 <= f <= 1:
            raise ValueError(f"possibility values lie in [0,1], got {v!r}")
        return f

    def poss(self, m):
        r = self._cache.get(("poss", m))
        if r is None:
            vals = self.values
            r = self._cache[("poss", m)] = max((vals[i] for i in bits(m)), default=Fraction(0))
        return r

    def _le(self, a, b):
        return self.poss(a) <= self.poss(b)

    def describe(self):
        return {"backend": "poss", "omega": list(self.worlds),
                "poss": {_key(w): str(v) for w, v in zip(self.worlds, self.values)}}


class EpsFamilySpace(_RankedSpace):
    """A sequence of probability measures given by leading exponents.

    World w has probability of order eps**k_w as eps goes to 0; inf marks a
    world of probability zero.  Pl(A) < Pl(B) iff Pr(A)/Pr(B) tends to 0,
    and Pl(A) <= Pl(B) iff not Pl(B) < Pl(A).  The ratio of two sums of
    such terms is governed by the smallest exponent on each side.
    """

    backend = "eps"

    def _coerce(self, v):
        return _coerce_kappa(v)

    def _order(self, m):
        # exponent of the leading term of Pr(m); inf when Pr(m) is identically 0
        vals = self.values
        return min((vals[i] for i in bits(m)), default=INF)

    def _vanishes_against(self, a, b):
        """lim Pr(a)/Pr(b) = 0."""
        ea, eb = self._order(a), self._order(b)
        if eb == INF:
            return False  # 0/0 or x/0: not a vanishing ratio
        return ea > eb

    def _le(self, a, b):
        return not self._vanishes_against(b, a)

    def describe(self):
        return {"backend": "eps", "omega": list(self.worlds),
                "k": {_key(w): (None if v == INF else v)
                      for w, v in zip(self.worlds, self.values)}}


class TableSpace(PlausSpace):
    """Explicit realization: every subset is mapped to an element of a poset.

    ``value`` maps subsets (any iterable of worlds) to element ids; ``le`` is
    a list of (x, y) pairs meaning x <= y, closed reflexively/transitively.
    """

    backend = "table"

    def __init__(self, worlds, elems, le, value):
        super().__init__(worlds)
        self.elems = tuple(elems)
        eidx = {e: i for i, e in enumerate(self.elems)}
        if len(eidx) != len(self.elems):
            raise ValueError("duplicate table elements")
        up = [1 << i for i in range(len(self.elems))]  # up[x]: elements >= x
        for x, y in le:
            up[eidx[x]] |= 1 << eidx[y]
        changed = True
        while changed:
            changed = False
            for i in range(len(up)):
                acc = up[i]
                for j in bits(up[i]):
                    acc |= up[j]
                if acc != up[i]:
                    up[i], changed = acc, True
        for i in range(len(up)):
            for j in bits(up[i]):
                if j != i and up[j] >> i & 1:
                    raise ValueError("table order is not antisymmetric")
        self._up = up
        self._eidx = eidx
        vals = {}
        for k, e in value.items():
            m = k if isinstance(k, int) and not isinstance(k, bool) else self.mask(k)
            if e not in eidx:
                raise ValueError(f"unknown table element {e!r}")
            vals[m] = eidx[e]
        if len(vals) != 1 << self.n:
            raise ValueError("table must give a value to every subset")
        self._val = vals
        bot, top = vals[0], vals[self.full]
        for i in range(len(up)):
            if not (up[bot] >> i & 1 and up[i] >> top & 1):
                raise ValueError("value(empty) must be bottom and value(omega) top")
        for m in range(1 << self.n):
            for i in range(self.n):
                if not up[vals[m]] >> vals[m | (1 << i)] & 1:
                    raise ValueError("table violates monotonicity")

    def _le(self, a, b):
        return bool(self._up[self._val[a]] >> self._val[b] & 1)

    def value_of(self, ws):
        return self.elems[self._val[self.mask(ws)]]

    def describe(self):
        le = [[self.elems[i], self.elems[j]] for i in range(len(self.elems))
              for j in bits(self._up[i]) if i != j]
        value = {",".join(_key(w) for w in self.worlds if m >> self.index[w] & 1):
                 self.elems[v] for m, v in sorted(self._val.items())}
        return {"backend": "table", "omega": list(self.worlds),
                "elems": list(self.elems), "le": le, "value": value}


class RelationalSpace(PlausSpace):
    """Space given by a comparison procedure on local masks."""

    backend = "relational"

    def __init__(self, worlds, le_fn, label="relational"):
        super().__init__(worlds)
        self._fn = le_fn
        self.label = label

    def _le(self, a, b):
        return self._fn(a, b)


class RestrictedSpace(PlausSpace):
    """Conditioning of a procedural space on a subset of its universe."""

    backend = "relational"

    def __init__(self, parent, keep):
        super().__init__(keep)
        self.parent = parent
        self._pos = [parent.index[w] for w in self.worlds]
        self._ups = {}

    def _up(self, m):
        r = self._ups.get(m)
        if r is None:
            pos = self._pos
            r = self._ups[m] = sum(1 << pos[i] for i in bits(m))
        return r

    def _le(self, a, b):
        return self.parent.le_mask(self._up(a), self._up(b))


class RelabeledSpace(PlausSpace):
    backend = "relational"

    def __init__(self, parent, worlds):
        super().__init__(worlds)
        self.parent = parent

    def _le(self, a, b):
        return self.parent.le_mask(a, b)


def empty_space():
    return KappaSpace({})


def probability_table(probs):
    """Table ordered by a probability measure: Pl(A) <= Pl(B) iff Pr(A) <= Pr(B)."""
    worlds = list(probs)
    p = [Fraction(probs[w]) for w in worlds]
    n = len(worlds)
    measure = {}
    for m in range(1 << n):
        measure[m] = sum((p[i] for i in bits(m)), Fraction(0))
    levels = sorted(set(measure.values()))
    names = [str(x) for x in levels]
    le = [(names[i], names[i + 1]) for i in range(len(names) - 1)]
    value = {m: str(v) for m, v in measure.items()}
    return TableSpace(worlds, names, le, value)


def _key(w):
    return w if isinstance(w, str) else str(w)


def _sortkey(x):
    return [str(v) for v in x]


# -- JSON ----------------------------------------------------------------

def space_from_json(obj, omega=None, decode=None):
    """Build a space from its JSON description.

    ``decode`` maps JSON world names back to world labels (identity by default).
    """
    dec = decode or (lambda w: w)
    kind = obj.get("backend")
    if "omega" in obj:
        omega = [dec(w) for w in obj["omega"]]
    if kind == "pref":
        prec = [(dec(a), dec(b)) for a, b in obj.get("prec", [])]
        if omega is None:
            raise ValueError("pref backend needs an omega")
        return PreferenceSpace(omega, prec)
    if kind in ("kappa", "eps", "poss"):
        field = {"kappa": "kappa", "eps": "k", "poss": "poss"}[kind]
        vals = {dec(w): v for w, v in obj.get(field, {}).items()}
        cls = {"kappa": KappaSpace, "eps": EpsFamilySpace, "poss": PossibilitySpace}[kind]
        return cls(vals, worlds=omega if omega is not None else list(vals))
    if kind == "table":
        if omega is None:
            raise ValueError("table backend needs an omega")
        value = {}
        for k, e in obj["value"].items():
            value[frozenset(dec(w) for w in k.split(",") if w)] = e
        return TableSpace(omega, obj["elems"], [tuple(p) for p in obj.get("le", [])], value)
    raise ValueError(f"unknown backend {kind!r}")
