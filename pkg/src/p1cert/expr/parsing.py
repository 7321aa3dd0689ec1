"""Recursive-descent parser for the expression grammar.

Grammar (whitespace insignificant)::

    sum     := wedge (('+' | '-') wedge)*
    wedge   := product ('/\\' product)*
    product := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := INT | VAR | BASIS | '(' sum ')'

Variables are ``x y y' yp alpha u s``; basis symbols ``dx dy dy' dyp du
dalpha``.  Scalars parse to :class:`RatExpr`; anything containing a basis
symbol parses to a ``KForm``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import VARS
from .ratexpr import Chart, RatExpr

VARIABLES = {"x": "x", "y": "y", "yp": "yp", "y'": "yp", "alpha": "alpha", "u": "u", "s": "s"}
BASIS = {"dx": 0, "dy": 1, "dyp": "p", "dy'": "p", "du": "u", "dalpha": 3}


class ParseError(ValueError):
    """Syntax or chart error, carrying the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, END
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("INT", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if j < n and text[j] == "'" and word in ("y", "dy"):
                word += "'"
                j += 1
            if word not in VARIABLES and word not in BASIS:
                raise ParseError(f"unknown symbol {word!r}", i)
            out.append(Token("NAME", word, i))
            i = j
            continue
        if text.startswith("/\\", i):
            out.append(Token("OP", "/\\", i))
            i += 2
            continue
        if ch in "+-*/^()":
            out.append(Token("OP", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    out.append(Token("END", "", n))
    return out


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.tokens = tokenize(text)
        self.k = 0
        self.chart = chart

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def take(self) -> Token:
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.kind != "OP" or t.text != text:
            raise ParseError(f"expected {text!r}", t.pos)
        return self.take()

    def parse(self):
        value = self.sum()
        if self.tok.kind != "END":
            raise ParseError(f"unexpected token {self.tok.text!r}", self.tok.pos)
        return value

    def sum(self):
        value = self.wedge()
        while self.tok.kind == "OP" and self.tok.text in ("+", "-"):
            op = self.take()
            rhs = self.wedge()
            value = _add(value, rhs, op) if op.text == "+" else _add(value, _neg(rhs), op)
        return value

    def wedge(self):
        value = self.product()
        while self.tok.kind == "OP" and self.tok.text == "/\\":
            op = self.take()
            rhs = self.product()
            value = _wedge(value, rhs, op, self.chart)
        return value

    def product(self):
        value = self.unary()
        while self.tok.kind == "OP" and self.tok.text in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                value = _mul(value, rhs, op)
            else:
                if not isinstance(rhs, RatExpr):
                    raise ParseError("division by a form", op.pos)
                if rhs.is_zero:
                    raise ParseError("division by zero", op.pos)
                value = value / rhs if isinstance(value, RatExpr) else value.scale(rhs.inverse())
        return value

    def unary(self):
        if self.tok.kind == "OP" and self.tok.text in ("+", "-"):
            op = self.take()
            value = self.unary()
            return _neg(value) if op.text == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "OP" and self.tok.text == "^":
            op = self.take()
            sign = 1
            if self.tok.kind == "OP" and self.tok.text == "-":
                self.take()
                sign = -1
            t = self.tok
            if t.kind != "INT":
                raise ParseError("integer exponent expected", t.pos)
            self.take()
            n = sign * int(t.text)
            if not isinstance(base, RatExpr):
                raise ParseError("power of a form", op.pos)
            if n < 0 and base.is_zero:
                raise ParseError("division by zero", op.pos)
            return base**n
        return base

    def atom(self):
        t = self.tok
        if t.kind == "INT":
            self.take()
            return RatExpr.const(int(t.text))
        if t.kind == "NAME":
            self.take()
            return self._name(t)
        if t.kind == "OP" and t.text == "(":
            self.take()
            value = self.sum()
            self.expect(")")
            return value
        raise ParseError("expression expected" if t.kind != "END" else "unexpected end of input", t.pos)

    def _name(self, t: Token):
        from ..exterior import KForm

        if t.text in VARIABLES:
            name = VARIABLES[t.text]
            if self.chart is Chart.A and name in ("u", "s"):
                raise ParseError(f"{name} is not allowed in {self.chart}", t.pos)
            if self.chart is Chart.B and name == "yp":
                raise ParseError(f"{t.text} is not allowed in {self.chart}", t.pos)
            return RatExpr.var(name)
        idx = BASIS[t.text]
        if idx == "p":
            if self.chart is Chart.B:
                raise ParseError(f"{t.text} is not allowed in {self.chart}", t.pos)
            idx = 2
        elif idx == "u":
            if self.chart is Chart.A:
                raise ParseError(f"{t.text} is not allowed in {self.chart}", t.pos)
            idx = 2
        return KForm.basis(self.chart, idx)


def _is_form(v) -> bool:
    return not isinstance(v, RatExpr)


def _neg(v):
    return -v


def _add(a, b, op: Token):
    if _is_form(a) or _is_form(b):
        from ..exterior import KForm

        a = a if _is_form(a) else KForm.function(b.chart, a)
        b = b if _is_form(b) else KForm.function(a.chart, b)
        if a.degree != b.degree:
            if a.is_zero and a.degree == 0:
                return b
            if b.is_zero and b.degree == 0:
                return a
            raise ParseError("sum of forms of different degree", op.pos)
        return a + b
    return a + b


def _mul(a, b, op: Token):
    if _is_form(a) and _is_form(b):
        if a.degree and b.degree:
            raise ParseError("product of two forms; use /\\ for the wedge product", op.pos)
        return a.wedge(b)
    if _is_form(a):
        return a.scale(b)
    if _is_form(b):
        return b.scale(a)
    return a * b


def _wedge(a, b, op: Token, chart: Chart):
    from ..exterior import KForm

    a = a if _is_form(a) else KForm.function(chart, a)
    b = b if _is_form(b) else KForm.function(chart, b)
    try:
        return a.wedge(b)
    except ValueError as exc:
        raise ParseError(str(exc), op.pos) from exc


def parse_expr(text: str, chart: Chart = Chart.A):
    """Parse text into a canonical RatExpr or KForm in the given chart."""
    if isinstance(chart, str):
        chart = Chart(chart.replace("CHART_", ""))
    return _Parser(text, chart).parse()


def parse_ratexpr(text: str, chart: Chart = Chart.A) -> RatExpr:
    value = parse_expr(text, chart)
    if not isinstance(value, RatExpr):
        if value.degree == 0:
            return value.coefficient(())
        raise ParseError("expected a function, got a form", 0)
    return value


__all__ = ["ParseError", "parse_expr", "parse_ratexpr", "tokenize", "VARS"]
