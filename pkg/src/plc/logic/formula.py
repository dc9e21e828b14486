"""Formula AST and the canonical printer."""
from dataclasses import dataclass
from typing import ClassVar


class Formula:
    __slots__ = ()
    prec: ClassVar[int] = 9

    def __str__(self):
        return to_text(self)

    # operator sugar for building formulas in code
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Implies(self, other)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return "Bot()"


TRUE = Top()
FALSE = Bot()


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: int
    sub: Formula


@dataclass(frozen=True)
class Believe(Formula):
    agent: int
    sub: Formula


@dataclass(frozen=True)
class Necess(Formula):
    agent: int
    sub: Formula


@dataclass(frozen=True)
class Next(Formula):
    sub: Formula


@dataclass(frozen=True)
class Cond(Formula):
    agent: int
    ante: Formula
    cons: Formula


UNARY_MODAL = (Know, Believe, Necess)
_LETTER = {Know: "K", Believe: "B", Necess: "N"}

# binding strength: higher binds tighter
_PREC = {Cond: 1, Implies: 2, Or: 3, And: 4}


def _prec(f):
    return _PREC.get(type(f), 5)


def to_text(f):
    """Canonical concrete syntax; parse(to_text(f)) == f."""
    t = type(f)
    if t is Top:
        return "true"
    if t is Bot:
        return "false"
    if t is Prop:
        return f.name
    if t is Not:
        return "!" + _wrap(f.sub, 5)
    if t in UNARY_MODAL:
        return f"{_LETTER[t]}{f.agent} " + _wrap(f.sub, 5)
    if t is Next:
        return "X " + _wrap(f.sub, 5)
    if t in (And, Or):
        op = " & " if t is And else " | "
        p = _PREC[t]
        # left-associative: the right operand needs parentheses at equal strength
        return _wrap(f.left, p) + op + _wrap(f.right, p + 1)
    if t is Implies:
        return _wrap(f.left, 3) + " => " + _wrap(f.right, 2)
    if t is Cond:
        return _wrap(f.ante, 2) + f" ~>{f.agent} " + _wrap(f.cons, 1)
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, need):
    s = to_text(f)
    return s if _prec(f) >= need else "(" + s + ")"


def children(f):
    t = type(f)
    if t in (Top, Bot, Prop):
        return ()
    if t in (And, Or, Implies):
        return (f.left, f.right)
    if t is Cond:
        return (f.ante, f.cons)
    return (f.sub,)


def rebuild(f, kids):
    """Same node type as f with new children."""
    t = type(f)
    if t in (And, Or, Implies):
        return t(*kids)
    if t is Cond:
        return Cond(f.agent, *kids)
    if t in UNARY_MODAL:
        return t(f.agent, kids[0])
    if t in (Not, Next):
        return t(kids[0])
    return f


def expand(f):
    """Remove B_i and N_i: B_i p = K_i(true ~>i p), N_i p = !p ~>i false."""
    t = type(f)
    if t is Believe:
        return Know(f.agent, Cond(f.agent, TRUE, expand(f.sub)))
    if t is Necess:
        return Cond(f.agent, Not(expand(f.sub)), FALSE)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, [expand(k) for k in kids])


def subformulas(f):
    """Distinct subformulas, children before parents."""
    out, seen = [], set()

    def walk(g):
        for k in children(g):
            walk(k)
        if g not in seen:
            seen.add(g)
            out.append(g)

    walk(f)
    return out


def size(f):
    return 1 + sum(size(k) for k in children(f))


def depth(f):
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def props(f):
    return {g.name for g in subformulas(f) if type(g) is Prop}


def agents(f):
    return {g.agent for g in subformulas(f) if hasattr(g, "agent")}


def next_depth(f):
    """Maximal nesting of X."""
    inner = max((next_depth(k) for k in children(f)), default=0)
    return inner + (type(f) is Next)


def has_next(f):
    return next_depth(f) > 0


def is_propositional(f):
    return all(type(g) in (Top, Bot, Prop, Not, And, Or, Implies) for g in subformulas(f))


def is_temporally_linear(f):
    """No X inside the scope of a knowledge, belief, necessity or conditional operator."""
    t = type(f)
    if t in UNARY_MODAL or t is Cond:
        return not any(has_next(k) for k in children(f))
    return all(is_temporally_linear(k) for k in children(f))


def substitute(f, mapping):
    """Replace propositions by formulas (mapping name -> Formula)."""
    if type(f) is Prop:
        return mapping.get(f.name, f)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, [substitute(k, mapping) for k in kids])


def conj(fs):
    fs = list(fs)
    if not fs:
        return TRUE
    out = fs[0]
    for g in fs[1:]:
        out = And(out, g)
    return out


def disj(fs):
    fs = list(fs)
    if not fs:
        return FALSE
    out = fs[0]
    for g in fs[1:]:
        out = Or(out, g)
    return out
