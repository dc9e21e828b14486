"""Axiom and rule schemes, compiled to mask functions over a frame.

A scheme is written with metavariables ``phi``, ``psi`` and ``chi``.  An
instantiation assigns each metavariable a set of worlds (a mask).  Any
formula of the object language denotes some set of worlds in a given
frame, so ranging the metavariables over all subsets covers every
substitution instance at once; ``closure_pool`` gives the smaller family
of sets that are actually definable from the frame's propositions.
"""
from dataclasses import dataclass, field
from itertools import product

from ..logic import formula as F
from ..logic import expand, parse, substitute, to_text

METAVARS = ("phi", "psi", "chi")


@dataclass(frozen=True)
class Scheme:
    name: str
    conclusion: str
    premises: tuple = ()
    note: str = ""
    metavars: tuple = field(default=None)

    @property
    def is_rule(self):
        return bool(self.premises)

    def formulas(self):
        return [parse(t) for t in (*self.premises, self.conclusion)]

    def used_metavars(self):
        if self.metavars is not None:
            return self.metavars
        names = set()
        for f in self.formulas():
            names |= F.props(f)
        return tuple(v for v in METAVARS if v in names)


def _s(name, concl, *prem, note=""):
    return Scheme(name, concl, tuple(prem), note)


_MODAL = {
    "K1": "{M} (phi | !phi)",
    "K2": "{M} phi & {M} (phi => psi) => {M} psi",
    "K3": "{M} phi => phi",
    "K4": "{M} phi => {M} {M} phi",
    "K5": "!{M} phi => {M} !{M} phi",
    "K6": "!{M} false",
}


def modal(name, op):
    """K-family scheme for the operator ``op`` (e.g. "K1" or "B1")."""
    if name == "RK2":
        return _s(f"RK2[{op}]", f"{op} phi", "phi")
    return _s(f"{name}[{op}]", _MODAL[name].replace("{M}", op))


SCHEMES = {s.name: s for s in [
    _s("K1", "(phi => psi) => (!psi => !phi)"),
    _s("RK1", "psi", "phi", "phi => psi"),
    _s("KB1", "B1 phi => K1 B1 phi"),
    _s("KB2", "K1 phi => B1 phi"),
    _s("QUAL-a", "(chi ~>1 phi) & (chi ~>1 psi) => (chi ~>1 (phi & psi))"),
    _s("QUAL-b", "B1 phi & B1 psi => B1 (phi & psi)"),
    _s("QUAL-c", "B1 phi & B1 (phi & psi) => B1 psi", note="as printed"),
    _s("C1", "phi ~>1 phi"),
    _s("C2", "(phi ~>1 psi) & (phi ~>1 chi) => (phi ~>1 (psi & chi))"),
    _s("C3", "(phi ~>1 chi) & (psi ~>1 chi) => ((phi | psi) ~>1 chi)"),
    _s("C4", "(phi ~>1 psi) & (phi ~>1 chi) => ((phi & psi) ~>1 chi)"),
    _s("RC1", "(phi ~>1 chi) => (psi ~>1 chi)", "(phi => psi) & (psi => phi)"),
    _s("RC2", "(phi ~>1 psi) => (phi ~>1 chi)", "psi => chi"),
    _s("C5", "(phi ~>1 psi) & !(phi ~>1 !chi) => ((phi & chi) ~>1 psi)"),
    _s("C6", "!(true ~>1 false)"),
    _s("C7", "N1 phi ~>1 phi"),
    _s("C8", "((phi ~>1 psi) => N1 (phi ~>1 psi)) & (!(phi ~>1 psi) => N1 !(phi ~>1 psi))"),
    _s("C9", "K1 phi => N1 phi"),
    _s("C10", "(phi ~>1 psi) => K1 (phi ~>1 psi)"),
    _s("T1", "X phi & X (phi => psi) => X psi"),
    _s("T2", "(X phi => !X !phi) & (!X !phi => X phi)"),
    _s("BT1", "B1 X B1 phi => B1 phi"),
    _s("BT2", "B1 phi => B1 X B1 phi"),
    _s("COH", "N1 X phi => X N1 phi"),
    _s("KLM-LLE", "psi ~>1 chi", "(phi => psi) & (psi => phi)", "phi ~>1 chi"),
    _s("KLM-RW", "phi ~>1 chi", "psi => chi", "phi ~>1 psi"),
    _s("KLM-REF", "phi ~>1 phi"),
    _s("KLM-AND", "phi ~>1 (psi & chi)", "phi ~>1 psi", "phi ~>1 chi"),
    _s("KLM-OR", "(phi | psi) ~>1 chi", "phi ~>1 chi", "psi ~>1 chi"),
    _s("KLM-CM", "(phi & psi) ~>1 chi", "phi ~>1 psi", "phi ~>1 chi"),
]}
for _op in ("K1", "B1"):
    for _n in (*_MODAL, "RK2"):
        _sc = modal(_n, _op)
        SCHEMES[_sc.name] = _sc

KLM_RULES = ("KLM-LLE", "KLM-RW", "KLM-REF", "KLM-AND", "KLM-OR", "KLM-CM")


def get_scheme(name):
    try:
        return SCHEMES[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}") from None


# -- compilation -------------------------------------------------------------

def _ops(fr):
    memo = getattr(fr, "_ops", None)
    if memo is None:
        memo = fr._ops = {}
    return memo


def compile_formula(f, metavars=METAVARS):
    """Function (frame, env) -> (val, undef) masks, env mapping metavariables to masks."""
    if isinstance(f, str):
        f = parse(f)
    return _compile(expand(f), frozenset(metavars))


def _compile(f, mv):
    t = type(f)
    if t is F.Top:
        return lambda fr, env: (fr.full, 0)
    if t is F.Bot:
        return lambda fr, env: (0, 0)
    if t is F.Prop:
        name = f.name
        if name in mv:
            return lambda fr, env: (env[name], 0)
        return lambda fr, env: fr.ext(f)
    if t is F.Not:
        g = _compile(f.sub, mv)

        def neg(fr, env):
            v, u = g(fr, env)
            return fr.full & ~v, u
        return neg
    if t in (F.And, F.Or, F.Implies):
        g, h = _compile(f.left, mv), _compile(f.right, mv)
        if t is F.And:
            def conn(fr, env):
                v1, u1 = g(fr, env)
                v2, u2 = h(fr, env)
                return v1 & v2, u1 | u2
        elif t is F.Or:
            def conn(fr, env):
                v1, u1 = g(fr, env)
                v2, u2 = h(fr, env)
                return v1 | v2, u1 | u2
        else:
            def conn(fr, env):
                v1, u1 = g(fr, env)
                v2, u2 = h(fr, env)
                return (fr.full & ~v1) | v2, u1 | u2
        return conn
    if t is F.Know:
        g, i = _compile(f.sub, mv), f.agent

        def know(fr, env):
            v, u = g(fr, env)
            memo = _ops(fr)
            key = ("K", i, v, u)
            r = memo.get(key)
            if r is None:
                r = memo[key] = fr.op_know(fr.agent(i), v, u)
            return r
        return know
    if t is F.Cond:
        g, h, i = _compile(f.ante, mv), _compile(f.cons, mv), f.agent

        def cond(fr, env):
            va, ua = g(fr, env)
            vb, ub = h(fr, env)
            memo = _ops(fr)
            key = ("C", i, va, vb, ua, ub)
            r = memo.get(key)
            if r is None:
                r = memo[key] = fr.op_cond(fr.agent(i), va, vb, ua, ub)
            return r
        return cond
    if t is F.Next:
        g = _compile(f.sub, mv)

        def nxt(fr, env):
            v, u = g(fr, env)
            memo = _ops(fr)
            key = ("X", v, u)
            r = memo.get(key)
            if r is None:
                r = memo[key] = fr.op_next(v, u)
            return r
        return nxt
    raise TypeError(f"cannot compile {f!r}")


class Compiled:
    def __init__(self, scheme):
        self.scheme = scheme
        self.metavars = scheme.used_metavars()
        self.premises = [compile_formula(t) for t in scheme.premises]
        self.conclusion = compile_formula(scheme.conclusion)

    def failure(self, fr, env):
        """Mask of worlds where the instance fails (0 if it holds or a premise is not valid).

        Worlds where the formula is undefined (X past the horizon) are skipped.
        """
        for p in self.premises:
            v, u = p(fr, env)
            if fr.full & ~v & ~u:
                return 0
        v, u = self.conclusion(fr, env)
        return fr.full & ~v & ~u


def all_envs(metavars, masks):
    """Every assignment of the given masks to the metavariables."""
    for combo in product(masks, repeat=len(metavars)):
        yield dict(zip(metavars, combo))


def instance_text(scheme, env, names=None):
    """Instantiated premises and conclusion, metavariables renamed to ``names``."""
    names = names or {v: v for v in env}
    mapping = {v: F.Prop(names[v]) for v in env}
    sub = [to_text(substitute(parse(t), mapping)) for t in (*scheme.premises, scheme.conclusion)]
    return sub[:-1], sub[-1]


# -- definable sets ----------------------------------------------------------

def closure_pool(fr, props, depth=3, unary=("!",), binary=("&", "|", "=>"), agents=(1,)):
    """Sets definable by formulas of depth <= ``depth``: {mask: representative formula}.

    Built level by level over extensions, so formulas with equal
    extensions are represented once (by the first, shallowest one found).
    ``unary`` may contain "K", "B", "N", "X"; ``binary`` may contain "~>".
    """
    pool = {}

    def add(f):
        v, u = fr.ext(expand(f))
        if u:
            return
        if v in pool:
            return False
        pool[v] = f
        return True

    add(F.TRUE)
    add(F.FALSE)
    for p in props:
        add(F.Prop(p))
    for _ in range(depth):
        known = list(pool.values())
        grew = False
        for f in known:
            for op in unary:
                for g in _unary(op, f, agents):
                    grew = add(g) or grew
        for f in known:
            for g in known:
                for op in binary:
                    for h in _binary(op, f, g, agents):
                        grew = add(h) or grew
        if not grew:
            break
    return pool


def _unary(op, f, agents):
    if op == "!":
        return [F.Not(f)]
    if op == "X":
        return [F.Next(f)]
    cls = {"K": F.Know, "B": F.Believe, "N": F.Necess}[op]
    return [cls(i, f) for i in agents]


def _binary(op, f, g, agents):
    if op == "&":
        return [F.And(f, g)]
    if op == "|":
        return [F.Or(f, g)]
    if op == "=>":
        return [F.Implies(f, g)]
    return [F.Cond(i, f, g) for i in agents]
