"""Exhaustive checks on spaces: laws, qualitativeness, ranking, MP sets."""
from .. import caps
from ..common import Check, OK, bits, masks_by_size, submasks
from .spaces import (EpsFamilySpace, KappaSpace, PossibilitySpace,
                     PreferenceSpace, RelabeledSpace, TableSpace, INF)


class _Sentinel:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


BOTTOM = _Sentinel("Bottom")
UNDEFINED = _Sentinel("Undefined")


def order_matrix(space, cap=None):
    """rows[a] has bit b set iff Pl(a) <= Pl(b), for all local masks a, b."""
    caps.enforce("enum", space.n, "order matrix", cap)
    size = 1 << space.n
    le = space.le_mask
    return [sum(1 << b for b in range(size) if le(a, b)) for a in range(size)]


def _sets(space, *ms):
    return tuple(sorted(space.members(m), key=str) for m in ms)


def check_space_laws(space, cap=None):
    """Reflexivity, transitivity and monotonicity (A1) of the induced order."""
    rows = order_matrix(space, cap)
    for a, row in enumerate(rows):
        if not row >> a & 1:
            return Check(False, {"law": "reflexive", "sets": _sets(space, a)})
    for a, row in enumerate(rows):
        for b in bits(row):
            if rows[b] & ~row:
                c = next(bits(rows[b] & ~row))
                return Check(False, {"law": "transitive", "sets": _sets(space, a, b, c)})
    for a in range(len(rows)):
        for i in range(space.n):
            b = a | (1 << i)
            if not rows[a] >> b & 1:
                return Check(False, {"law": "A1", "sets": _sets(space, a, b)})
    return OK


def _over_cap(space, cap):
    return space.n > (caps.get("enum") if cap is None else cap)


def _known(space, prop):
    """Verdict fixed by the backend's construction, or None."""
    while isinstance(space, RelabeledSpace):
        space = space.parent
    if isinstance(space, (KappaSpace, PossibilitySpace, EpsFamilySpace)):
        return OK
    if isinstance(space, PreferenceSpace):
        if prop == "qual":
            return OK
        for i in range(space.n):
            for j in range(i + 1, space.n):
                if not (space.below[i] >> j & 1 or space.below[j] >> i & 1):
                    return Check(False, {"law": "comparable",
                                         "sets": ([space.worlds[i]], [space.worlds[j]])})
        return OK
    return None


def is_qualitative(space, cap=None):
    """A2 over all pairwise disjoint triples and A3 over pairs of bottom sets.

    Above the enumeration cap, backends that are qualitative by construction
    (preference, kappa, possibility, eps) are accepted without enumeration;
    other backends raise CapExceeded.
    """
    cached = getattr(space, "_qual", None)
    if cached is not None:
        return cached
    if _over_cap(space, cap) and _known(space, "qual") is not None:
        space._qual = _known(space, "qual")
        return space._qual
    rows = order_matrix(space, cap)

    def gt(x, y):
        return rows[y] >> x & 1 and not rows[x] >> y & 1

    full = space.full
    result = OK
    for a in submasks(full):
        if not a:
            continue
        rest = full & ~a
        for b in submasks(rest):
            for c in submasks(rest & ~b):
                if gt(a | b, c) and gt(a | c, b) and not gt(a, b | c):
                    result = Check(False, {"axiom": "A2", "sets": _sets(space, a, b, c)})
                    break
            if not result:
                break
        if not result:
            break
    if result:
        bottoms = [m for m in range(full + 1) if rows[m] & 1]
        for i, a in enumerate(bottoms):
            for b in bottoms[i + 1:]:
                if not rows[a | b] & 1:
                    result = Check(False, {"axiom": "A3", "sets": _sets(space, a, b)})
                    break
            if not result:
                break
    space._qual = result
    return result


def is_ranking(space, cap=None):
    """All pairs comparable and Pl(A u B) = max(Pl(A), Pl(B))."""
    cached = getattr(space, "_rank", None)
    if cached is not None:
        return cached
    if _over_cap(space, cap) and _known(space, "rank") is not None:
        space._rank = _known(space, "rank")
        return space._rank
    rows = order_matrix(space, cap)
    result = OK
    size = len(rows)
    for a in range(size):
        for b in range(a + 1, size):
            ab, ba = rows[a] >> b & 1, rows[b] >> a & 1
            if not (ab or ba):
                result = Check(False, {"law": "comparable", "sets": _sets(space, a, b)})
                break
            hi = b if ab else a
            u = a | b
            if not rows[u] >> hi & 1:
                result = Check(False, {"law": "max", "sets": _sets(space, a, b)})
                break
        if not result:
            break
    space._rank = result
    return result


def mp_search(space, cap=None):
    """MP set by subset search in order of increasing size (local mask).

    Returns BOTTOM, UNDEFINED, or the mask of the unique inclusion-minimal
    A with Pl(A) > Pl(complement of A).
    """
    if space.is_bottom_mask(space.full):
        return BOTTOM
    caps.enforce("enum", space.n, "MP search", cap)
    full = space.full
    found = []
    for a in masks_by_size(space.n):
        if any(f & a == f for f in found):
            continue
        if space.gt_mask(a, full & ~a):
            found.append(a)
    if len(found) != 1:
        return UNDEFINED
    return found[0]


def _mp_mask(space, cap=None):
    if space.n == 0 or space.is_bottom_mask(space.full):
        return BOTTOM
    if isinstance(space, PreferenceSpace):
        return space.minimal_mask(space.full)
    if isinstance(space, (KappaSpace, EpsFamilySpace)):
        best = min(space.values)
        return sum(1 << i for i, v in enumerate(space.values) if v == best)
    if isinstance(space, PossibilitySpace):
        best = max(space.values)
        return sum(1 << i for i, v in enumerate(space.values) if v == best)
    if isinstance(space, RelabeledSpace):
        return _mp_mask(space.parent, cap)
    return mp_search(space, cap)


def most_plausible(space, cap=None):
    """Most plausible worlds as a frozenset, or BOTTOM / UNDEFINED."""
    cached = getattr(space, "_mp", None)
    if cached is None:
        cached = space._mp = _mp_mask(space, cap)
    if cached is BOTTOM or cached is UNDEFINED:
        return cached
    return space.members(cached)


def most_plausible_mask(space, cap=None):
    r = getattr(space, "_mp", None)
    if r is None:
        most_plausible(space, cap)
        r = space._mp
    return r


def _unwrap(space):
    labels = space.worlds
    while isinstance(space, RelabeledSpace):
        space = space.parent
    return space, labels


def _structural_same(s1, s2):
    """Backend-level comparison for preference and ranked spaces, or None."""
    b1, l1 = _unwrap(s1)
    b2, l2 = _unwrap(s2)
    if isinstance(b1, PreferenceSpace) and isinstance(b2, PreferenceSpace):
        pos = {w: k for k, w in enumerate(l1)}
        tr = [pos[w] for w in l2]
        for j in range(b2.n):
            m = sum(1 << tr[q] for q in bits(b2.below[j]))
            if m != b1.below[tr[j]]:
                return False
        return True
    ranked = (KappaSpace, PossibilitySpace, EpsFamilySpace)
    if type(b1) is type(b2) and isinstance(b1, ranked):
        return _levels(b1, l1) == _levels(b2, l2)
    return None


def _levels(space, labels):
    """World -> position among the distinct values; only the order of values matters.

    The bottom value (infinite rank, possibility 0) keeps a level of its own.
    """
    vals = space.values
    if isinstance(space, PossibilitySpace):
        bottom, ordered = 0, sorted(set(vals), reverse=True)
    else:
        bottom, ordered = INF, sorted(set(vals))
    rank = {v: ("bottom" if v == bottom else k) for k, v in enumerate(ordered)}
    return {w: rank[v] for w, v in zip(labels, vals)}


def _normal_description(space):
    try:
        d = space.describe()
    except TypeError:
        return None
    kind = d["backend"]
    if kind == "pref":
        return kind, frozenset(d["omega"]), frozenset(tuple(p) for p in d["prec"])
    if kind in ("kappa", "eps", "poss"):
        field = {"kappa": "kappa", "eps": "k", "poss": "poss"}[kind]
        return kind, frozenset(d[field].items())
    return kind, frozenset(d["omega"]), tuple(d["elems"]), frozenset(map(tuple, d["le"])), \
        frozenset(d["value"].items())


def same_space(s1, s2, cap=None):
    """Same universe and cmp-identical order.

    Identity and equal descriptions short-cut; otherwise the order is
    compared on all subset pairs when the universe is within the equality
    cap, and the spaces are reported different above it.
    """
    if s1 is s2:
        return True
    if set(s1.worlds) != set(s2.worlds):
        return False
    fast = _structural_same(s1, s2)
    if fast is not None:
        return fast
    d1 = _normal_description(s1)
    if d1 is not None and d1 == _normal_description(s2):
        return True
    limit = caps.get("equality") if cap is None else cap
    if s1.n > limit:
        return False
    pos = [s2.index[w] for w in s1.worlds]
    tr = [sum(1 << pos[i] for i in bits(m)) for m in range(1 << s1.n)]
    for a in range(1 << s1.n):
        for b in range(1 << s1.n):
            if s1.le_mask(a, b) != s2.le_mask(tr[a], tr[b]):
                return False
    return True


def materialize(space, cap=None):
    """Extensional Table realization of any space (classes of mutually <= sets)."""
    caps.enforce("materialize", space.n, "materialize", cap)
    reps, cls = [], {}
    for m in range(1 << space.n):
        for k, r in enumerate(reps):
            if space.le_mask(m, r) and space.le_mask(r, m):
                cls[m] = k
                break
        else:
            cls[m] = len(reps)
            reps.append(m)
    names = [f"e{k}" for k in range(len(reps))]
    le = [(names[i], names[j]) for i, ri in enumerate(reps) for j, rj in enumerate(reps)
          if i != j and space.le_mask(ri, rj)]
    value = {m: names[k] for m, k in cls.items()}
    return TableSpace(space.worlds, names, le, value)


def is_normal(space):
    return space.is_normal()


__all__ = ["BOTTOM", "UNDEFINED", "INF", "order_matrix", "check_space_laws",
           "is_qualitative", "is_ranking", "mp_search", "most_plausible",
           "most_plausible_mask", "same_space", "materialize", "is_normal"]
