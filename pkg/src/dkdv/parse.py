"""Reading differential polynomials from text.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

``NAME`` is a ring variable with an optional jet suffix (``v``, ``u1_3``),
``ep`` for epsilon or ``I`` for the imaginary unit.  Division is only by
nonzero constants, so ``1/24*v_2`` and ``(1/2+1/3*I)*w`` both work.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diffpoly import DEFAULT_ORDER, DiffPoly, Ring
from .scalar import I as _I

__all__ = ["ParseError", "parse_expr"]


class ParseError(ValueError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*(?:_\d+)?)|(.))", re.S)


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    text: str
    pos: int


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        if m.group(1):
            out.append(_Tok("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), m.start(2)))
        else:
            out.append(_Tok("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, ring, E):
        self.text = text
        self.ring = ring
        self.E = E
        self.toks = _tokens(text)
        self.i = 0

    def where(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, *self.where(tok.pos))

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, op):
        t = self.peek()
        if t.kind == "op" and t.text == op:
            self.i += 1
            return True
        return False

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression")
        p = self.expr()
        t = self.peek()
        if t.kind != "end":
            self.error(f"unexpected {t.text!r}")
        return p

    def expr(self):
        p = self.term()
        while True:
            if self.accept("+"):
                p = p + self.term()
            elif self.accept("-"):
                p = p - self.term()
            else:
                return p

    def term(self):
        p = self.unary()
        while True:
            if self.accept("*"):
                p = p * self.unary()
            elif self.peek().kind == "op" and self.peek().text == "/":
                tok = self.take()
                q = self.unary()
                if q.jets() or any(e for e, _ in q.terms) or not q:
                    self.error("can only divide by a nonzero constant", tok)
                p = p.scale(1 / q.terms[(0, ())])
            else:
                return p

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            t = self.peek()
            if t.kind != "num":
                self.error("exponent must be a nonnegative integer")
            self.take()
            return base ** int(t.text)
        return base

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return self.ring.const(int(t.text), self.E)
        if t.kind == "name":
            self.take()
            return self.name(t)
        if self.accept("("):
            p = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return p
        if t.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.text!r}")

    def name(self, t):
        if t.text == "ep":
            return self.ring.eps(1, self.E)
        if t.text == "I":
            return self.ring.const(_I, self.E)
        base, _, order = t.text.partition("_")
        if base not in self.ring.names:
            self.error(f"unknown variable {base!r}; this ring has {', '.join(self.ring.names)}", t)
        return self.ring.var(base, int(order) if order else 0, self.E)


def parse_expr(text: str, ring: Ring, E: int = DEFAULT_ORDER) -> DiffPoly:
    """Parse ``text`` into a DiffPoly of ``ring`` truncated after ``eps^E``."""
    return _Parser(text, ring, E).parse()
