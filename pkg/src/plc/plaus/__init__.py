"""Plausibility spaces: backends, comparison, checks, conditioning, lex sums."""
from .spaces import (Cmp, EpsFamilySpace, INF, KappaSpace, PlausSpace,
                     PossibilitySpace, PreferenceSpace, RelationalSpace,
                     TableSpace, empty_space, probability_table, space_from_json)
from .properties import (BOTTOM, UNDEFINED, check_space_laws, is_qualitative,
                         is_ranking, materialize, most_plausible,
                         most_plausible_mask, mp_search, order_matrix, same_space)
from .lexsum import LexSumSpace, lex_sum, lex_sum_set


def cmp(space, a, b):
    return space.cmp(a, b)


def restrict(space, e):
    return space.restrict(e)


__all__ = [
    "Cmp", "PlausSpace", "PreferenceSpace", "KappaSpace", "PossibilitySpace",
    "EpsFamilySpace", "TableSpace", "RelationalSpace", "LexSumSpace", "INF",
    "BOTTOM", "UNDEFINED", "cmp", "restrict", "is_qualitative", "is_ranking",
    "most_plausible", "most_plausible_mask", "mp_search", "materialize",
    "same_space", "order_matrix", "check_space_laws", "lex_sum", "lex_sum_set",
    "empty_space", "probability_table", "space_from_json",
]
