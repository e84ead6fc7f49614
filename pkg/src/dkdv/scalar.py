"""Exact coefficient arithmetic over Q and Q(i).

Rationals are ``gmpy2.mpq`` values (always reduced, positive denominator,
arbitrary precision).  :class:`GaussianRational` pairs two of them.
"""

from __future__ import annotations

import operator
import re

from gmpy2 import mpq

Rational = type(mpq(0))

__all__ = [
    "Rational",
    "GaussianRational",
    "I",
    "ZERO",
    "ONE",
    "rat",
    "gauss",
    "rat_arith",
    "gauss_arith",
    "format_rational",
    "parse_rational",
]

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rat(x, y=1) -> Rational:
    """Build a reduced rational from ints, strings like ``"3/4"`` or mpq."""
    if isinstance(x, str):
        x = parse_rational(x)
    return mpq(x, y) if y != 1 else mpq(x)


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Rational:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return mpq(int(num), int(den) if den else 1)


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Rational else mpq(re)
        self.im = im if type(im) is Rational else mpq(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not exact")
        if isinstance(x, float):
            raise TypeError("floats are not exact")
        return cls(x, 0)

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if type(other) is not GaussianRational:
            if isinstance(other, (int, Rational)):
                return GaussianRational(self.re + other, self.im)
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not GaussianRational:
            if isinstance(other, (int, Rational)):
                return GaussianRational(self.re - other, self.im)
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if type(other) is not GaussianRational:
            if isinstance(other, (int, Rational)):
                return GaussianRational(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            return GaussianRational(a * c, a * d)
        if not d:
            return GaussianRational(a * c, b * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if type(other) is not GaussianRational:
            if isinstance(other, (int, Rational)):
                if not other:
                    raise ZeroDivisionError("division by zero in Q(i)")
                return GaussianRational(self.re / other, self.im / other)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussianRational(other, 0) * self.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- text -------------------------------------------------------------
    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        if not self.im:
            return format_rational(self.re)
        if self.im == 1:
            im = "I"
        elif self.im == -1:
            im = "-I"
        else:
            im = f"{format_rational(self.im)}*I"
        if not self.re:
            return im
        sep = "" if im.startswith("-") else "+"
        return f"{format_rational(self.re)}{sep}{im}"


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)


def gauss(x, y=0) -> GaussianRational:
    return GaussianRational(rat(x) if isinstance(x, str) else x, rat(y) if isinstance(y, str) else y)


def rat_arith(a, b, kind: str) -> Rational:
    """Field operation ``kind`` in {add, sub, mul, div} on two rationals."""
    a, b = mpq(a), mpq(b)
    if kind == "div" and not b:
        raise ZeroDivisionError("rational division by zero")
    try:
        return _OPS[kind](a, b)
    except KeyError:
        raise ValueError(f"unknown operation {kind!r}") from None


def gauss_arith(a, b, kind: str) -> GaussianRational:
    """Field operation ``kind`` in {add, sub, mul, div} on Q(i)."""
    a = GaussianRational.coerce(a)
    b = GaussianRational.coerce(b)
    try:
        return _OPS[kind](a, b)
    except KeyError:
        raise ValueError(f"unknown operation {kind!r}") from None
