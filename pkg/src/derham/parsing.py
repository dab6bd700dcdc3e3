"""Recursive-descent parser for polynomial and differential-form expressions.

Grammar (ASCII)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/\\" | "/" | <juxtaposition>) unary)*
    unary   := "-" unary | "+" unary | power
    power   := atom ("^" INT)?
    atom    := INT | NAME | "d(" expr ")" | "(" expr ")"

``/`` divides by a nonzero constant, so ``3/2`` is a rational literal.  In
form mode a trailing ``/ f`` or ``/ f^s`` sets the pole order.  Variables are
``x1..x9``, with aliases ``x, y, z`` when there are at most three.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ._coeff import ONE, Q
from ._exterior import add_terms, d_terms, wedge_terms
from .polyring import Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(/\\|\^|\*\*|[-+*/()]))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "name", "op", "end"
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        start = mt.start(mt.lastindex)
        if mt.group(1):
            toks.append(_Tok("int", mt.group(1), start))
        elif mt.group(2):
            toks.append(_Tok("name", mt.group(2), start))
        else:
            op = "^" if mt.group(3) == "**" else mt.group(3)
            toks.append(_Tok("op", op, start))
        pos = mt.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def variable_table(nvars: int) -> dict[str, int]:
    if not 1 <= nvars <= 9:
        raise ValueError("between 1 and 9 variables are supported")
    table = {f"x{i + 1}": i for i in range(nvars)}
    if nvars <= 3:
        table.update({name: i for i, name in enumerate("xyz"[:nvars])})
    return table


# Values are graded: {index tuple: Poly}; the empty tuple holds the 0-form part.
def _const(c, n):
    return {(): Poly.constant(c, n)} if c else {}


def _add(a, b, n, sign=1):
    return add_terms(a, b, sign)


def _wedge(a, b, n):
    return wedge_terms(a, b)


def _d(a, n):
    return d_terms(a, n)


class _Parser:
    def __init__(self, text: str, nvars: int, forms: bool):
        self.text = text
        self.n = nvars
        self.forms = forms
        self.vars = variable_table(nvars)
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.pos, self.text)

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> _Tok:
        if self.tok.kind != "op" or self.tok.value != value:
            self.error(f"expected {value!r}")
        return self.take()

    def at_pole_suffix(self) -> bool:
        t = self.tok
        if not (self.forms and t.kind == "op" and t.value == "/"):
            return False
        nxt = self.toks[self.i + 1]
        return nxt.kind == "name" and nxt.value == "f"

    def parse(self):
        value = self.expr()
        pole = 0
        if self.at_pole_suffix():
            self.take()
            self.take()
            pole = 1
            if self.tok.kind == "op" and self.tok.value == "^":
                self.take()
                if self.tok.kind != "int":
                    self.error("expected integer pole order")
                pole = int(self.take().value)
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.value!r}")
        return value, pole

    def expr(self):
        value = self.term()
        while self.tok.kind == "op" and self.tok.value in ("+", "-"):
            op = self.take().value
            value = _add(value, self.term(), self.n, 1 if op == "+" else -1)
        return value

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("int", "name") or (t.kind == "op" and t.value == "(")

    def term(self):
        value = self.unary()
        while True:
            t = self.tok
            if t.kind == "op" and t.value in ("*", "/\\"):
                self.take()
                value = _wedge(value, self.unary(), self.n)
            elif t.kind == "op" and t.value == "/":
                if self.at_pole_suffix():
                    return value
                self.take()
                divisor = self.unary()
                if set(divisor) - {()} or (divisor and not divisor[()].is_constant()):
                    self.error("division is only allowed by a nonzero constant", t)
                c = divisor[()].constant_term() if divisor else 0
                if not c:
                    self.error("division by zero", t)
                inv = ONE / c
                value = {k: v.scale(inv) for k, v in value.items()}
            elif self._starts_atom():
                value = _wedge(value, self.unary(), self.n)
            else:
                return value

    def unary(self):
        t = self.tok
        if t.kind == "op" and t.value in ("+", "-"):
            self.take()
            inner = self.unary()
            return inner if t.value == "+" else {k: -v for k, v in inner.items()}
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.value == "^":
            caret = self.take()
            if self.tok.kind != "int":
                self.error("exponent must be a non-negative integer literal")
            k = int(self.take().value)
            if set(base) - {()}:
                self.error("cannot raise a differential form to a power", caret)
            base = {(): base[()] ** k} if base else ({} if k else _const(1, self.n))
            base = {key: v for key, v in base.items() if v}
        return base

    def atom(self):
        t = self.take()
        if t.kind == "int":
            return _const(Q(int(t.value)), self.n)
        if t.kind == "name":
            if t.value == "d" and self.tok.kind == "op" and self.tok.value == "(":
                if not self.forms:
                    self.error("differentials are not allowed in a polynomial", t)
                self.take()
                inner = self.expr()
                self.expect(")")
                return _d(inner, self.n)
            if t.value not in self.vars:
                self.error(f"unknown variable {t.value!r}", t)
            return {(): Poly.var(self.vars[t.value], self.n)}
        if t.kind == "op" and t.value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        self.error("unexpected end of input" if t.kind == "end" else f"unexpected {t.value!r}", t)


def parse_poly(text: str, nvars: int) -> Poly:
    value, _ = _Parser(text, nvars, forms=False).parse()
    return value.get((), Poly.zero(nvars))


def parse_graded(text: str, nvars: int) -> tuple[int, dict, int]:
    """Parse a form expression into ``(p, {indices: Poly}, pole_order)``.

    The expression must be homogeneous in form degree.
    """
    value, pole = _Parser(text, nvars, forms=True).parse()
    degrees = {len(k) for k in value}
    if len(degrees) > 1:
        raise ParseError("form is not homogeneous in form degree", 0, text)
    p = degrees.pop() if degrees else 0
    return p, value, pole
