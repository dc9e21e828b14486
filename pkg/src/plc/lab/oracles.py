"""Independent brute-force oracles used to cross-check the fast paths."""
from fractions import Fraction

from ..common import bits
from ..plaus import INF, TableSpace


def free_lub_table(worlds, below):
    """Table realization of a preference order through its lub-completion.

    Each set A is sent to the set of worlds at or below some member of A in
    preference (the lower set it generates, with better worlds on top);
    these lower sets, ordered by inclusion, form the free lub-completion of
    the singletons.  ``below[i]`` is the mask of worlds preferred to i.
    """
    n = len(worlds)
    worse = [0] * n  # worse[i]: worlds that i is preferred to, plus i
    for i in range(n):
        worse[i] |= 1 << i
        for j in bits(below[i]):
            worse[j] |= 1 << i
    gen = {}
    for a in range(1 << n):
        acc = 0
        for i in bits(a):
            acc |= worse[i]
        gen[a] = acc
    elems = sorted(set(gen.values()))
    names = {e: f"d{e}" for e in elems}
    le = [(names[x], names[y]) for x in elems for y in elems if x != y and x & ~y == 0]
    value = {a: names[g] for a, g in gen.items()}
    return TableSpace(worlds, [names[e] for e in elems], le, value)


def lewis_conditional(space, a, b):
    """phi ~> psi by the preferential clause, on local masks a = [phi], b = [psi].

    For every phi-world w1 there is a (phi & psi)-world w2 at least as good
    as w1 such that every world strictly better than w2 satisfies phi => psi.
    """
    below = space.below
    ab = a & b
    impl = (space.full & ~a) | b
    for w1 in bits(a):
        ok = False
        for w2 in bits(ab):
            if w2 != w1 and not below[w1] >> w2 & 1:
                continue
            if below[w2] & ~impl:
                continue
            ok = True
            break
        if not ok:
            return False
    return True


def eps_le(exponents, a, b, eps=Fraction(1, 10 ** 6)):
    """Pl(A) <= Pl(B) for the family Pr(w) ~ eps**k_w, by exact evaluation at a small eps.

    With at most a handful of worlds the ratio of two such sums is either
    bounded below by 1/n or above by n*eps, so a fixed threshold separates
    "tends to 0" from "does not".
    """
    def pr(m):
        return sum((eps ** exponents[i] for i in bits(m) if exponents[i] != INF), Fraction(0))

    pa, pb = pr(a), pr(b)
    if pa == 0:
        return True
    return not pb / pa < Fraction(1, 1000)


def minimal_by(items, less):
    """Elements with no strictly smaller element."""
    return [x for x in items if not any(less(y, x) for y in items)]


def mp_brute(space):
    """Inclusion-minimal sets strictly more plausible than their complement."""
    full = space.full
    good = [a for a in range(full + 1) if space.gt_mask(a, full & ~a)]
    return [a for a in good if not any(b != a and b & ~a == 0 for b in good)]


def preferential_oracle(M, phi, psi, w, i=1):
    """phi ~>_i psi at world w of M, decided by the preferential clause.

    The space at (w, i) must come from a preference order.
    """
    from ..kripke import truth_set
    from ..plaus import PreferenceSpace
    fr = M.frame
    s = fr.spaces[fr.agent(i)][M._idx(w)]
    if not isinstance(s, PreferenceSpace):
        raise TypeError("the preferential clause needs a preference-backed space")
    a = fr.local(s, fr.to_mask(truth_set(M, phi)))
    b = fr.local(s, fr.to_mask(truth_set(M, psi)))
    return lewis_conditional(s, a, b)
