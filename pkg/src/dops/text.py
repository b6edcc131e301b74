"""Canonical text form and the expression parser.

Grammar (whitespace insensitive, multiplication always explicit)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'x' | 'y' | 'Dx' | 'Dy' | '(' expr ')'

``Dx``/``Dy`` are only legal in operator context, where ``*`` is
composition and is not commutative.  ``∂x``, ``∂_x`` (and the y forms) are
accepted as input aliases.  Division is only by nonzero constants.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .exact import Poly, X, Y
from .weyl import DX, DY, WeylOp


def _format_scalar(c: Fraction) -> str:
    return str(c)


def _mono(parts):
    out = []
    for name, e in parts:
        if e == 1:
            out.append(name)
        elif e > 1:
            out.append(f"{name}^{e}")
    return "*".join(out)


def _join(terms):
    """terms: list of (coefficient, monomial string) in display order."""
    if not terms:
        return "0"
    pieces = []
    for k, (c, mono) in enumerate(terms):
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{_format_scalar(a)}*{mono}"
        else:
            body = _format_scalar(a)
        if k == 0:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


def format_poly(p: Poly) -> str:
    """Canonical string: graded lex with x > y, highest term first."""
    return _join([(c, _mono([("x", i), ("y", j)])) for (i, j), c in p.items()])


def format_op(theta: WeylOp) -> str:
    """Canonical string of the left normal form, one monomial x^a*y^b*Dx^i*Dy^j per term."""
    terms = []
    for (bx, by), f in theta.items():
        for (i, j), c in f.items():
            terms.append((c, _mono([("x", i), ("y", j), ("Dx", bx), ("Dy", by)])))
    return _join(terms)


# -- parsing -------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+)
  | (?P<ident>∂_?[xy]|[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_ALIASES = {"∂x": "Dx", "∂_x": "Dx", "∂y": "Dy", "∂_y": "Dy"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text, line0=1):
    tokens = []
    pos = 0
    line, line_start = line0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            for k, ch in enumerate(s):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            if kind == "ident":
                s = _ALIASES.get(s, s)
            tokens.append(_Token(kind, s, line, col))
        pos = m.end()
    tokens.append(_Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text, operators, line0=1):
        self.tokens = _tokenize(text, line0)
        self.pos = 0
        self.operators = operators
        idents = {"x": X, "y": Y}
        if operators:
            idents = {"x": WeylOp.from_poly(X), "y": WeylOp.from_poly(Y), "Dx": DX, "Dy": DY}
        self.idents = idents

    @property
    def tok(self):
        return self.tokens[self.pos]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col, tok.text or "<end of input>")

    def take(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text):
        if self.tok.text != text:
            raise self.error(f"expected {text!r}")
        return self.take()

    def parse(self):
        if self.tok.kind == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.tok.kind != "end":
            if self.tok.kind in ("num", "ident") or self.tok.text == "(":
                raise self.error("implicit multiplication is not allowed; use '*'")
            raise self.error("unexpected token")
        return value

    def expr(self):
        value = self.term()
        while self.tok.text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.tok.text in ("*", "/"):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok.text == "*":
                value = value * rhs
            else:
                c = self._as_constant(rhs)
                if c is None:
                    raise self.error("division is only allowed by a constant", op_tok)
                if c == 0:
                    raise self.error("division by zero", op_tok)
                value = value * (1 / c)
        return value

    def unary(self):
        if self.tok.text == "-":
            self.take()
            return -self.unary()
        if self.tok.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text == "^":
            self.take()
            t = self.tok
            if t.kind != "num":
                raise self.error("exponent must be a non-negative integer literal")
            self.take()
            base = base ** int(t.text)
        if self.tok.kind in ("num", "ident") or self.tok.text == "(":
            raise self.error("implicit multiplication is not allowed; use '*'")
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            n = int(t.text)
            return WeylOp.from_poly(Poly.constant(n)) if self.operators else Poly.constant(n)
        if t.kind == "ident":
            if t.text not in self.idents:
                raise self.error(f"unknown identifier {t.text!r}")
            self.take()
            return self.idents[t.text]
        if t.text == "(":
            self.take()
            value = self.expr()
            self.expect(")")
            return value
        raise self.error("expected a number, variable or '('")

    def _as_constant(self, value):
        if isinstance(value, WeylOp):
            if value.is_zero():
                return Fraction(0)
            if set(value.terms) != {(0, 0)}:
                return None
            value = value.coeff(0, 0)
        if value.is_constant():
            return value.constant_term()
        return None


def parse_poly(text: str, line: int = 1) -> Poly:
    """Parse a polynomial in x, y with rational coefficients."""
    return _Parser(text, operators=False, line0=line).parse()


def parse_op(text: str, line: int = 1) -> WeylOp:
    """Parse an operator expression and return its left normal form."""
    return _Parser(text, operators=True, line0=line).parse()
