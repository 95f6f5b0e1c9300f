"""Recursive-descent parser for LTL surface syntax.

Grammar, loosest binding first::

    equiv   := implies ('<->' implies)*
    implies := or ('->' implies)?                  right-assoc
    or      := and ('|' and)*
    and     := binary ('&' binary)*
    binary  := unary (('U'|'R'|'W'|'M') binary)?   right-assoc
    unary   := ('!'|'X'|'F'|'G') unary | atom
    atom    := '(' equiv ')' | 'true' | '1' | 'false' | '0' | identifier

Negation, implication, equivalence, W and M are eliminated while parsing, so
the result is always in positive normal form.
"""

from __future__ import annotations

import re

from ltl2slaa.ltl.formula import (
    Formula,
    always,
    ap,
    conj,
    disj,
    eventually,
    ff,
    negate,
    next_,
    release,
    tt,
    until,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>[01](?![0-9])))"
)
_UNARY = {"!", "X", "F", "G"}
_BINARY_TEMPORAL = {"U", "R", "W", "M"}
_CONSTANTS = {"true": tt, "1": tt, "false": ff, "0": ff}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            stripped = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[stripped]!r}", stripped)
        tok = m.group("op") or m.group("ident") or m.group("num")
        tokens.append((tok, m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            got = self.peek() or "end of input"
            raise ParseError(f"expected {tok!r}, got {got!r}", self.pos())
        self.i += 1

    def parse(self) -> Formula:
        f = self.equiv()
        if self.peek():
            raise ParseError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def equiv(self) -> Formula:
        f = self.implies()
        while self.peek() == "<->":
            self.take()
            g = self.implies()
            f = disj(conj(f, g), conj(negate(f), negate(g)))
        return f

    def implies(self) -> Formula:
        f = self.or_()
        if self.peek() == "->":
            self.take()
            return disj(negate(f), self.implies())
        return f

    def or_(self) -> Formula:
        operands = [self.and_()]
        while self.peek() == "|":
            self.take()
            operands.append(self.and_())
        return disj(*operands)

    def and_(self) -> Formula:
        operands = [self.binary()]
        while self.peek() == "&":
            self.take()
            operands.append(self.binary())
        return conj(*operands)

    def binary(self) -> Formula:
        left = self.unary()
        op = self.peek()
        if op not in _BINARY_TEMPORAL:
            return left
        self.take()
        right = self.binary()
        if op == "U":
            return until(left, right)
        if op == "R":
            return release(left, right)
        if op == "W":
            return release(right, disj(right, left))
        return until(right, conj(left, right))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in _UNARY:
            self.take()
            sub = self.unary()
            if tok == "!":
                return negate(sub)
            if tok == "X":
                return next_(sub)
            if tok == "F":
                return eventually(sub)
            return always(sub)
        return self.atom()

    def atom(self) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "(":
            self.take()
            f = self.equiv()
            self.expect(")")
            return f
        if tok in _CONSTANTS:
            self.take()
            return _CONSTANTS[tok]()
        if tok and (tok[0].isalpha() or tok[0] == "_") and tok not in _BINARY_TEMPORAL:
            self.take()
            return ap(tok)
        raise ParseError(f"unexpected {tok!r}" if tok else "unexpected end of input", pos)


def parse(text: str) -> Formula:
    """Parse ``text`` into a PNF formula, raising :class:`ParseError` on bad input."""
    return _Parser(text).parse()
