"""Truncated one-variable power series with exact coefficients.

A :class:`TaylorSeries` holds the coefficients of ``z^0 .. z^N``; anything
beyond ``N`` is unknown, so binary operations truncate to the smaller order.
Coefficients may be rationals or :class:`~dkdv.scalar.GaussianRational`.
"""

from __future__ import annotations

from math import factorial

from gmpy2 import mpq

from .scalar import GaussianRational, I, Rational

__all__ = ["TaylorSeries", "exp_series", "sin_series", "cos_series"]


def _zero_like(c):
    return GaussianRational(0, 0) if isinstance(c, GaussianRational) else mpq(0)


class TaylorSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        for c in coeffs:
            if isinstance(c, float):
                raise TypeError("floating point coefficients are not exact")
        self.coeffs = [c if isinstance(c, (Rational, GaussianRational)) else mpq(c) for c in coeffs]

    @classmethod
    def one(cls, order: int) -> "TaylorSeries":
        return cls([1] + [0] * order)

    @classmethod
    def z(cls, order: int) -> "TaylorSeries":
        return cls([0, 1] + [0] * (order - 1))

    @classmethod
    def from_even(cls, coeffs) -> "TaylorSeries":
        """Series ``sum c_g z^(2g)`` from its even coefficients."""
        out = []
        for c in coeffs:
            out += [c, 0]
        return cls(out[:-1])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all(a == b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))

    def __hash__(self):  # pragma: no cover - series are not used as keys
        raise TypeError("TaylorSeries is unhashable")

    def __repr__(self):
        return f"TaylorSeries([{', '.join(str(c) for c in self.coeffs)}])"

    def truncate(self, order: int) -> "TaylorSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series known to O(z^{self.order + 1}) up to z^{order}")
        return TaylorSeries(self.coeffs[: order + 1])

    def even_coeffs(self):
        return self.coeffs[0::2]

    def is_even(self) -> bool:
        return not any(self.coeffs[1::2])

    def is_real(self) -> bool:
        return all(not isinstance(c, GaussianRational) or c.is_real() for c in self.coeffs)

    def real(self) -> "TaylorSeries":
        """Drop to rational coefficients; the imaginary parts must vanish."""
        if not self.is_real():
            raise ValueError("series has non-real coefficients")
        return TaylorSeries([c.re if isinstance(c, GaussianRational) else c for c in self.coeffs])

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TaylorSeries):
            return TaylorSeries([self.coeffs[0] + other] + self.coeffs[1:])
        n = min(self.order, other.order)
        return TaylorSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])])

    __radd__ = __add__

    def __neg__(self):
        return TaylorSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TaylorSeries):
            return TaylorSeries([c * other for c in self.coeffs])
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = _zero_like(a[0] * b[0])
            for j in range(k + 1):
                if a[j] and b[k - j]:
                    acc = acc + a[j] * b[k - j]
            out.append(acc)
        return TaylorSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "TaylorSeries":
        a = self.coeffs
        if not a[0]:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = _zero_like(inv0)
            for j in range(1, k + 1):
                if a[j]:
                    acc = acc + a[j] * out[k - j]
            out.append(-acc * inv0)
        return TaylorSeries(out)

    def __truediv__(self, other):
        if isinstance(other, TaylorSeries):
            return self * other.inverse()
        return TaylorSeries([c / other for c in self.coeffs])

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = TaylorSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sqrt(self) -> "TaylorSeries":
        """Square root with constant term 1 (the branch s(0) = 1)."""
        a = self.coeffs
        if a[0] != 1:
            raise ValueError("square root needs constant term 1")
        s = [a[0] * 0 + 1]
        for k in range(1, self.order + 1):
            acc = a[k]
            for j in range(1, k):
                if s[j] and s[k - j]:
                    acc = acc - s[j] * s[k - j]
            s.append(acc / 2)
        return TaylorSeries(s)

    def derivative(self) -> "TaylorSeries":
        if self.order == 0:
            return TaylorSeries([0])
        return TaylorSeries([k * c for k, c in enumerate(self.coeffs)][1:])

    def divide_by_z(self, k: int = 1) -> "TaylorSeries":
        """Exact division by ``z^k``; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError(f"series is not divisible by z^{k}")
        return TaylorSeries(self.coeffs[k:])

    def times_z(self, k: int = 1) -> "TaylorSeries":
        """Multiply by ``z^k``; the known order stays ``self.order``."""
        zero = _zero_like(self.coeffs[0])
        return TaylorSeries(([zero] * k + self.coeffs)[: self.order + 1])


def exp_series(a, order: int) -> TaylorSeries:
    """``exp(a*z)`` for a scalar ``a`` (rational or Gaussian)."""
    if not isinstance(a, GaussianRational):
        a = mpq(a)
    return TaylorSeries([a**k / factorial(k) if k else a * 0 + 1 for k in range(order + 1)])


def sin_series(a, order: int) -> TaylorSeries:
    """``sin(a*z)`` for rational ``a``."""
    a = mpq(a)
    out = []
    for k in range(order + 1):
        out.append(mpq((-1) ** (k // 2), factorial(k)) * a**k if k % 2 else mpq(0))
    return TaylorSeries(out)


def cos_series(a, order: int) -> TaylorSeries:
    """``cos(a*z)`` for rational ``a``."""
    a = mpq(a)
    out = []
    for k in range(order + 1):
        out.append(mpq((-1) ** (k // 2), factorial(k)) * a**k if k % 2 == 0 else mpq(0))
    return TaylorSeries(out)


def i_times(s: TaylorSeries) -> TaylorSeries:
    return TaylorSeries([I * c for c in s.coeffs])
