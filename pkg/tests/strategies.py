"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from plc.logic import (FALSE, TRUE, And, Believe, Cond, Implies, Know, Necess, Next, Not, Or,
                       Prop)
from plc.plaus import EpsFamilySpace, KappaSpace, PossibilitySpace, PreferenceSpace

KAPPA = st.one_of(st.integers(0, 3), st.just("inf"))
POSS = st.sampled_from(["0", "1/4", "1/3", "1/2", "1"])


@st.composite
def worlds(draw, max_size=5):
    n = draw(st.integers(0, max_size))
    return [f"w{k}" for k in range(n)]


@st.composite
def preference_spaces(draw, max_size=5):
    ws = draw(worlds(max_size))
    # pairs oriented along the list order keep the relation acyclic
    pairs = [(a, b) for i, a in enumerate(ws) for b in ws[i + 1:]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(ws))
    rename = dict(zip(ws, perm))
    return PreferenceSpace(ws, [(rename[a], rename[b]) for a, b in chosen])


@st.composite
def kappa_spaces(draw, max_size=5):
    ws = draw(worlds(max_size))
    return KappaSpace({w: draw(KAPPA) for w in ws}, worlds=ws)


@st.composite
def eps_spaces(draw, max_size=5):
    ws = draw(worlds(max_size))
    return EpsFamilySpace({w: draw(KAPPA) for w in ws}, worlds=ws)


@st.composite
def poss_spaces(draw, max_size=5):
    ws = draw(worlds(max_size))
    return PossibilitySpace({w: draw(POSS) for w in ws}, worlds=ws)


def qualitative_spaces(max_size=5):
    return st.one_of(preference_spaces(max_size), kappa_spaces(max_size),
                     eps_spaces(max_size), poss_spaces(max_size))


def subsets(space):
    return st.integers(0, space.full).map(space.members)


def formulas(props=("p", "q"), agents=(1,), temporal=False, max_leaves=8):
    atoms = st.sampled_from([TRUE, FALSE] + [Prop(p) for p in props])
    agent = st.sampled_from(agents or (1,))

    def extend(sub):
        options = [
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
            st.tuples(sub, sub).map(lambda t: Implies(*t)),
        ]
        if agents:
            options += [
                st.tuples(agent, sub).map(lambda t: Know(*t)),
                st.tuples(agent, sub).map(lambda t: Believe(*t)),
                st.tuples(agent, sub).map(lambda t: Necess(*t)),
                st.tuples(agent, sub, sub).map(lambda t: Cond(*t)),
            ]
        if temporal:
            options.append(sub.map(Next))
        return st.one_of(options)

    return st.recursive(atoms, extend, max_leaves=max_leaves)
