"""Formula language: AST, parser, printer and syntactic utilities."""
from .formula import (FALSE, TRUE, And, Believe, Bot, Cond, Formula, Implies,
                      Know, Necess, Next, Not, Or, Prop, Top, agents, children,
                      conj, depth, disj, expand, has_next, is_propositional,
                      is_temporally_linear, next_depth, props, rebuild, size,
                      subformulas, substitute, to_text)
from .parser import parse

__all__ = [
    "Formula", "Top", "Bot", "TRUE", "FALSE", "Prop", "Not", "And", "Or",
    "Implies", "Know", "Believe", "Necess", "Next", "Cond", "parse", "to_text",
    "expand", "subformulas", "children", "rebuild", "size", "depth", "props",
    "agents", "next_depth", "has_next", "is_propositional",
    "is_temporally_linear", "substitute", "conj", "disj",
]
