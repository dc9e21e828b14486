import pytest
from hypothesis import given, settings

from plc.errors import FormulaSyntaxError, UnknownOperator
from plc.logic import (FALSE, TRUE, And, Believe, Cond, Implies, Know, Necess, Next, Not, Or, Prop,
                       agents, expand, is_temporally_linear, parse, subformulas, to_text)

from strategies import formulas

p, q = Prop("p"), Prop("q")


def test_parse_examples():
    assert parse("B1 p") == Believe(1, p)
    assert parse("X (p ~>2 q)") == Next(Cond(2, p, q))
    alice = parse("!K1 !(tell ~>1 !p) & !K1 !(tell ~>1 p)")
    tell = Prop("tell")
    assert alice == And(Not(Know(1, Not(Cond(1, tell, Not(p))))),
                        Not(Know(1, Not(Cond(1, tell, p)))))


def test_precedence():
    assert parse("!p & q | p => q ~>1 p") == Cond(1, Implies(Or(And(Not(p), q), p), q), p)
    assert parse("p => q => p") == Implies(p, Implies(q, p))
    assert parse("p ~>1 q ~>1 p") == Cond(1, p, Cond(1, q, p))


def test_atoms_with_parentheses():
    assert parse("faulty(X1) & !hi(l8)") == And(Prop("faulty(X1)"), Not(Prop("hi(l8)")))


def test_expand_examples():
    assert expand(Believe(1, p)) == Know(1, Cond(1, TRUE, p))
    assert expand(Necess(2, p)) == Cond(2, Not(p), FALSE)
    assert expand(p) == p


def test_subformulas_examples():
    assert subformulas(And(p, q)) == [p, q, And(p, q)]
    assert subformulas(Know(1, p)) == [p, Know(1, p)]
    assert subformulas(Cond(1, p, p)) == [p, Cond(1, p, p)]


@pytest.mark.parametrize("text", ["p &", "(p", "K p", "p ~> q", "p @ q", "", "X"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_error_position():
    with pytest.raises(UnknownOperator) as info:
        parse("p & (q @ p)")
    assert info.value.col == 8


def test_temporal_linearity():
    assert is_temporally_linear(parse("X K1 p"))
    assert not is_temporally_linear(parse("K1 X p"))
    assert not is_temporally_linear(parse("X p ~>1 q"))


@settings(max_examples=200, deadline=None)
@given(formulas(agents=(1, 2), temporal=True))
def test_roundtrip(f):
    text = to_text(f)
    assert parse(text) == f
    assert to_text(parse(text)) == text


@settings(max_examples=200, deadline=None)
@given(formulas(agents=(1, 2, 3)))
def test_expand_idempotent_and_agent_preserving(f):
    g = expand(f)
    assert expand(g) == g
    assert agents(g) == agents(f)
    assert not any(isinstance(x, (Believe, Necess)) for x in subformulas(g))
