"""Constant-coefficient even operators ``sum_g c_g (eps dx)^(2g)``.

The named operators are built from their generating functions by exact series
arithmetic.  ``L`` and ``X`` go through the complex exponentials in Q(i)[[z]];
``R`` goes through the real trigonometric form, which keeps ``X == R`` an
actual check rather than a tautology.
"""

from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq

from .diffpoly import DiffPoly
from .scalar import I, Rational
from .series import TaylorSeries, cos_series, exp_series, sin_series

__all__ = ["EvenOp", "NotNormalized", "make_named", "NAMED_OPERATORS"]


class NotNormalized(ValueError):
    """Inversion or square root of an operator whose constant term is not 1."""


class EvenOp:
    """``sum_{g=0}^{G} coeffs[g] (eps dx)^(2g)`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if any(isinstance(c, float) for c in coeffs):
            raise TypeError("floating point coefficients are not exact")
        coeffs = [mpq(c) for c in coeffs]
        if not coeffs:
            raise ValueError("an operator needs at least the constant coefficient")
        self.coeffs = tuple(coeffs)

    @classmethod
    def identity(cls, G: int = 0) -> "EvenOp":
        return cls([1] + [0] * G)

    @property
    def G(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, g):
        return self.coeffs[g]

    def __eq__(self, other):
        if not isinstance(other, EvenOp):
            return NotImplemented
        n = min(self.G, other.G) + 1
        return self.coeffs[:n] == other.coeffs[:n]

    __hash__ = None

    def __repr__(self):
        return "EvenOp([" + ", ".join(str(c) for c in self.coeffs) + "])"

    def truncate(self, G: int) -> "EvenOp":
        if G > self.G:
            raise ValueError(f"operator only known to g = {self.G}")
        return EvenOp(self.coeffs[: G + 1])

    def hat_series(self) -> TaylorSeries:
        """The symbol ``K(z) = sum c_g z^(2g)``."""
        return TaylorSeries.from_even(self.coeffs)

    @classmethod
    def from_series(cls, s: TaylorSeries) -> "EvenOp":
        if not s.is_even():
            raise ValueError("series is not even")
        s = s.real()
        return cls(s.even_coeffs())

    def compose(self, other: "EvenOp") -> "EvenOp":
        return EvenOp.from_series(self.hat_series() * other.hat_series())

    __matmul__ = compose

    def invert(self) -> "EvenOp":
        if self.coeffs[0] != 1:
            raise NotNormalized("inverse needs constant term 1")
        return EvenOp.from_series(self.hat_series().inverse())

    def sqrt(self) -> "EvenOp":
        if self.coeffs[0] != 1:
            raise NotNormalized("square root needs constant term 1")
        return EvenOp.from_series(self.hat_series().sqrt())

    def eps_coeffs(self) -> list:
        """Coefficients of ``(eps dx)^k`` for ``k = 0 .. 2G + 1`` (odd ones are 0)."""
        out = []
        for c in self.coeffs:
            out += [c, mpq(0)]
        return out

    def apply(self, p: DiffPoly) -> DiffPoly:
        """Apply to a differential polynomial, exactly through order ``p.E``."""
        top = p.E - p.min_eps()
        if top > 2 * self.G + 1:
            raise ValueError(
                f"operator known to g = {self.G}; applying it at eps order {p.E} needs g >= {(top + 1) // 2}"
            )
        return p.apply_eps_series(self.eps_coeffs())

    __call__ = apply


def _check_G(G: int):
    if G < 0:
        raise ValueError("G must be nonnegative")


def _L_series(N: int) -> TaylorSeries:
    # i z / (e^{iz/2} - e^{-iz/2})
    half = I * mpq(1, 2)
    den = (exp_series(half, N + 1) - exp_series(-half, N + 1)).divide_by_z()
    return (den.inverse() * I).real()


def _R_series(N: int) -> TaylorSeries:
    # 2 tan(z/2) / z
    return ((sin_series(mpq(1, 2), N + 1) / cos_series(mpq(1, 2), N + 1)).divide_by_z() * 2).truncate(N)


def _X_series(N: int) -> TaylorSeries:
    # (2 / (i z)) (e^{iz} - 1) / (e^{iz} + 1)
    e = exp_series(I, N + 1)
    return (((e - 1) / (e + 1)).divide_by_z() * 2 / I).real()


@lru_cache(maxsize=None)
def _named(name: str, G: int) -> EvenOp:
    N = 2 * G
    if name == "L":
        return EvenOp.from_series(_L_series(N))
    if name == "R":
        return EvenOp.from_series(_R_series(N))
    if name == "X":
        return EvenOp.from_series(_X_series(N))
    if name == "T":
        return _named("R", G).sqrt()
    if name == "Linv":
        return _named("L", G).invert()
    if name == "Rinv":
        return _named("R", G).invert()
    if name == "Tinv":
        return _named("T", G).invert()
    raise KeyError(f"unknown operator {name!r}")


NAMED_OPERATORS = ("L", "R", "X", "T", "Linv", "Rinv", "Tinv")


def make_named(name: str, G: int) -> EvenOp:
    """One of the named operators, exact through ``(eps dx)^(2G)``.

    ``L = (z/2)/sin(z/2)``, ``R = X = 2 tan(z/2)/z``, ``T = sqrt(R)`` in the
    symbol variable ``z = eps dx``; ``Linv``, ``Rinv``, ``Tinv`` are inverses.
    """
    _check_G(G)
    return _named(name, G)


def op_for_order(name: str, E: int) -> EvenOp:
    """A named operator long enough to act exactly at eps order ``E``."""
    return make_named(name, E // 2 + 1)


def rational_coeffs(op: EvenOp) -> list[Rational]:
    return list(op.coeffs)
