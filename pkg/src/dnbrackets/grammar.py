"""Expression parser for coordinates and jet variables.

Grammar (whitespace insignificant):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' INT)?
    base   := INT | VAR | '(' expr ')'
    VAR    := 'u' INDEX ('_' ORDER)?
    INT    := [0-9]+

so u3 is the coordinate u^3 and u3_2 is the jet variable u^{3,2} (an order
of 0 also means the plain coordinate).  Rationals are spelled with '/',
which the left-associative term rule evaluates identically to a fraction
literal.  Division requires the divisor to be free of jet variables.
"""

from __future__ import annotations

import re

from .diffpoly import DiffPoly
from .errors import ParseError
from .scalar import Scalar

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<var>u(?P<index>\d+)(?:_(?P<order>\d+))?)
      | (?P<int>\d+)
      | (?P<op>[-+*/^()])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        if m.group("var") is not None:
            start = m.start("var")
            index = int(m.group("index"))
            if index < 1:
                raise ParseError("coordinate index must be >= 1", start)
            order = m.group("order")
            tokens.append(("var", (index, int(order) if order else 0), start))
        elif m.group("int") is not None:
            tokens.append(("int", int(m.group("int")), m.start("int")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.at = 0

    def peek(self):
        return self.tokens[self.at]

    def advance(self):
        tok = self.tokens[self.at]
        self.at += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> DiffPoly:
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected trailing input", pos)
        return value

    def expr(self) -> DiffPoly:
        kind, val, _ = self.peek()
        negate = kind == "op" and val == "-"
        if negate:
            self.advance()
        value = self.term()
        if negate:
            value = -value
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> DiffPoly:
        value = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.factor()
                if val == "*":
                    value = value * rhs
                else:
                    if not rhs.is_scalar():
                        raise ParseError("cannot divide by a jet expression", pos)
                    sc = rhs.to_scalar()
                    if sc.is_zero:
                        raise ParseError("division by zero", pos)
                    value = value * (Scalar.one() / sc)
            else:
                return value

    def factor(self) -> DiffPoly:
        value = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            kind, e, pos = self.peek()
            if kind != "int":
                raise ParseError("expected an integer exponent", pos)
            self.advance()
            value = value**e
        return value

    def base(self) -> DiffPoly:
        kind, val, pos = self.advance()
        if kind == "int":
            return DiffPoly.from_fraction(val)
        if kind == "var":
            index, order = val
            return DiffPoly.jet(index, order)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ParseError("expected a number, variable, or parenthesis", pos)


def parse_expression(text: str) -> DiffPoly:
    """Parse text into a DiffPoly (jet variables allowed, thetas are not)."""
    return _Parser(text).parse()


def parse_scalar(text: str) -> Scalar:
    """Parse text into a Scalar; jet variables of positive order are rejected."""
    value = parse_expression(text)
    if not value.is_scalar():
        raise ParseError("jet variables are not allowed here", 0)
    return value.to_scalar()
