"""Small combinatorial families: labeled posets, weak orders, set partitions."""
from itertools import combinations, product

from .. import caps


def labeled_posets(n):
    """All strict partial orders on range(n) as tuples of below-masks.

    ``below[i]`` has bit j set iff j precedes i.  Brute force over relation
    subsets, filtered by transitivity (irreflexivity and antisymmetry come
    from only ever choosing one direction per pair), so it stays an
    independent oracle for the counts 1, 1, 3, 19, 219.
    """
    caps.enforce("enum", n, "poset enumeration", 5)
    pairs = list(combinations(range(n), 2))
    out = []
    for dirs in product((0, 1, 2), repeat=len(pairs)):
        below = [0] * n
        for (a, b), d in zip(pairs, dirs):
            if d == 1:
                below[b] |= 1 << a
            elif d == 2:
                below[a] |= 1 << b
        if all(below[j] & ~below[i] == 0
               for i in range(n) for j in range(n) if below[i] >> j & 1):
            out.append(tuple(below))
    return out


def weak_orders(n):
    """Rank vectors on range(n) using every rank 0..k-1 for some k (no gaps)."""
    out = []
    for ranks in product(range(n), repeat=n):
        used = set(ranks)
        if used == set(range(len(used))):
            out.append(ranks)
    return out


def set_partitions(items):
    """All partitions of a list into blocks (restricted growth strings)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first], *part]
        for k in range(len(part)):
            yield [*part[:k], [first, *part[k]], *part[k + 1:]]


def count_posets(n):
    return len(labeled_posets(n))
