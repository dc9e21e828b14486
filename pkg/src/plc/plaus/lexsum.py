"""Lexicographic combination of spaces with disjoint universes."""
from ..errors import UniversesOverlap
from .spaces import PlausSpace


class LexSumSpace(PlausSpace):
    """Earlier components dominate; a component only speaks when one side
    is non-bottom there and all earlier components were bottom on both sides.

    Pl(A) <= Pl(B) iff A and B are bottom in every component, or at the first
    component j where A or B is non-bottom, B is non-bottom and
    Pl_j(A n W_j) <= Pl_j(B n W_j).  The result is a preorder on sets.
    """

    backend = "relational"

    def __init__(self, spaces):
        spaces = tuple(spaces)
        seen = set()
        worlds = []
        for s in spaces:
            for w in s.worlds:
                if w in seen:
                    raise UniversesOverlap(f"world {w!r} occurs in two components")
                seen.add(w)
                worlds.append(w)
        super().__init__(worlds)
        self.components = spaces
        self._slices = []
        off = 0
        for s in spaces:
            self._slices.append((off, (1 << s.n) - 1))
            off += s.n

    def _le(self, a, b):
        for s, (off, width) in zip(self.components, self._slices):
            pa, pb = (a >> off) & width, (b >> off) & width
            a_bot, b_bot = s.is_bottom_mask(pa), s.is_bottom_mask(pb)
            if a_bot and b_bot:
                continue
            return not b_bot and s.le_mask(pa, pb)
        return True


def lex_sum(spaces):
    return LexSumSpace(spaces)


def lex_sum_set(spaces, enumeration=None):
    """Lex sum over an unordered collection.

    ``enumeration`` is a permutation of indices into ``spaces`` (list order)
    or a key function on spaces; by default spaces are ordered by the string
    form of their sorted universes.
    """
    spaces = list(spaces)
    if enumeration is None:
        order = sorted(range(len(spaces)), key=lambda i: sorted(map(str, spaces[i].worlds)))
    elif callable(enumeration):
        order = sorted(range(len(spaces)), key=lambda i: enumeration(spaces[i]))
    else:
        order = list(enumeration)
        if sorted(order) != list(range(len(spaces))):
            raise ValueError("enumeration must be a permutation of the spaces")
    return LexSumSpace([spaces[i] for i in order])
