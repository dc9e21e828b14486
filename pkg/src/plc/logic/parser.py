"""Recursive-descent parser for the concrete formula syntax.

    formula := cond
    cond    := impl [ "~>" INT cond ]
    impl    := disj [ "=>" impl ]
    disj    := conj { "|" conj }
    conj    := unary { "&" unary }
    unary   := "!" unary | ("K"|"B"|"N") INT unary | "X" unary | atom
    atom    := "true" | "false" | IDENT | "(" formula ")"

Operator words (K1, B2, N1, X, true, false) are reserved; identifiers may
carry one parenthesized argument list, e.g. ``faulty(X1)``.
"""
import re

from ..errors import FormulaSyntaxError, UnknownOperator
from .formula import (FALSE, TRUE, And, Believe, Cond, Implies, Know, Necess,
                      Next, Not, Or, Prop)

_MODAL = re.compile(r"([KBN])\s*(\d+)(?![A-Za-z0-9_])")
_NEXT = re.compile(r"X(?![A-Za-z0-9_])")
_COND = re.compile(r"~>\s*(\d+)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:\([A-Za-z0-9_,]*\))?")
_SYMBOLS = {"(": "LP", ")": "RP", "!": "NOT", "&": "AND", "|": "OR", "=>": "IMP"}
_MODAL_CLS = {"K": Know, "B": Believe, "N": Necess}


def _tokens(text):
    pos, n = 0, len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _COND.match(text, pos)
        if m:
            yield "COND", int(m.group(1)), pos
            pos = m.end()
            continue
        if text.startswith("=>", pos):
            yield "IMP", None, pos
            pos += 2
            continue
        if ch in _SYMBOLS:
            yield _SYMBOLS[ch], None, pos
            pos += 1
            continue
        m = _MODAL.match(text, pos)
        if m:
            yield "MODAL", (m.group(1), int(m.group(2))), pos
            pos = m.end()
            continue
        m = _NEXT.match(text, pos)
        if m:
            yield "NEXT", None, pos
            pos = m.end()
            continue
        m = _IDENT.match(text, pos)
        if m:
            word = m.group(0)
            kind = {"true": "TRUE", "false": "FALSE"}.get(word, "IDENT")
            yield kind, word, pos
            pos = m.end()
            continue
        end = pos + 1
        while end < n and not text[end].isspace() and text[end] not in "()":
            end += 1
        yield "BAD", text[pos:end], pos
        pos = end
    yield "EOF", None, n


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = list(_tokens(text))
        self.i = 0

    def where(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, msg, tok=None, cls=FormulaSyntaxError):
        tok = tok or self.toks[self.i]
        raise cls(msg, *self.where(tok[2]))

    def peek(self):
        tok = self.toks[self.i]
        if tok[0] == "BAD":
            self.fail(f"unknown operator {tok[1]!r}", tok, UnknownOperator)
        return tok

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, what):
        tok = self.peek()
        if tok[0] != kind:
            self.fail(f"expected {what}")
        return self.take()

    def formula(self):
        return self.cond()

    def cond(self):
        left = self.impl()
        if self.peek()[0] == "COND":
            agent = self.take()[1]
            if agent < 1:
                self.fail("agent indices start at 1", self.toks[self.i - 1])
            return Cond(agent, left, self.cond())
        return left

    def impl(self):
        left = self.disj()
        if self.peek()[0] == "IMP":
            self.take()
            return Implies(left, self.impl())
        return left

    def disj(self):
        f = self.conj()
        while self.peek()[0] == "OR":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek()[0] == "AND":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "NOT":
            self.take()
            return Not(self.unary())
        if kind == "MODAL":
            self.take()
            letter, agent = val
            if agent < 1:
                self.fail("agent indices start at 1", (kind, val, pos))
            return _MODAL_CLS[letter](agent, self.unary())
        if kind == "NEXT":
            self.take()
            return Next(self.unary())
        return self.atom()

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "TRUE":
            self.take()
            return TRUE
        if kind == "FALSE":
            self.take()
            return FALSE
        if kind == "IDENT":
            self.take()
            return Prop(val)
        if kind == "LP":
            self.take()
            f = self.formula()
            self.expect("RP", "')'")
            return f
        if kind == "EOF":
            self.fail("unexpected end of input")
        self.fail("expected a formula")


def parse(text):
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "EOF":
        p.fail("unexpected trailing input")
    return f
