"""Shift operators ``sum_n a_n Lambda^n`` with ``Lambda = exp(i eps dx)``.

Operators are stored as ``{power: DiffPoly}`` together with ``low``, the
smallest power whose coefficient is known exactly (``None`` when the operator
is an exact finite sum).  Square roots are infinite to the right, so they are
computed to a requested depth and products track how far down they stay
exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .diffpoly import DiffPoly, Ring, UV
from .scalar import GaussianRational, I
from .series import exp_series

__all__ = [
    "ShiftOp",
    "SymbolPoly",
    "WindowError",
    "ShapeError",
    "one_plus_shift_inverse",
    "solve_one_plus_shift",
    "shift_mul",
    "plus_part",
    "shift_sqrt",
    "commutator_over_ieps",
    "lax_operator",
    "lax_power_plus",
    "dispersionless_symbol",
]

_NEG_I = GaussianRational(0, -1)


class WindowError(ValueError):
    """A coefficient below the exactly-known window was requested."""


class ShapeError(ValueError):
    """The operator does not have the required leading shape."""


def _lo(x):
    return float("-inf") if x is None else x


class ShiftOp:
    __slots__ = ("ring", "coeffs", "E", "low")

    def __init__(self, ring: Ring, coeffs: dict, E: int, low=None):
        self.ring = ring
        self.E = E
        self.low = low
        self.coeffs = {}
        for m, c in coeffs.items():
            if c.ring != ring:
                raise ValueError("coefficients must share the operator's ring")
            c = c.truncate(E) if c.E > E else c
            if c.E < E:
                raise ValueError(f"coefficient of Lambda^{m} is only known to eps^{c.E}")
            if c and (low is None or m >= low):
                self.coeffs[m] = c

    @classmethod
    def monomial(cls, ring, power, coeff: DiffPoly | None = None, E=None):
        if coeff is None:
            coeff = ring.const(1, E)
        return cls(ring, {power: coeff}, coeff.E if E is None else E)

    @property
    def top(self):
        return max(self.coeffs, default=None)

    def __getitem__(self, m) -> DiffPoly:
        if self.low is not None and m < self.low:
            raise WindowError(f"Lambda^{m} lies below the exact window (lowest known power {self.low})")
        c = self.coeffs.get(m)
        return self.ring.zero(self.E) if c is None else c

    def powers(self):
        return sorted(self.coeffs, reverse=True)

    def __eq__(self, other):
        if not isinstance(other, ShiftOp):
            return NotImplemented
        lo = max(_lo(self.low), _lo(other.low))
        keys = {m for m in set(self.coeffs) | set(other.coeffs) if m >= lo}
        return all(self[m] == other[m] for m in keys)

    __hash__ = None

    def __add__(self, other: "ShiftOp") -> "ShiftOp":
        E = min(self.E, other.E)
        low = None if self.low is None and other.low is None else max(_lo(self.low), _lo(other.low))
        out = {}
        for m in set(self.coeffs) | set(other.coeffs):
            if low is not None and m < low:
                continue
            out[m] = self[m].truncate(E) + other[m].truncate(E)
        return ShiftOp(self.ring, out, E, low)

    def __neg__(self):
        return ShiftOp(self.ring, {m: -c for m, c in self.coeffs.items()}, self.E, self.low)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ShiftOp":
        return ShiftOp(self.ring, {m: p.scale(c) for m, p in self.coeffs.items()}, self.E, self.low)

    def __mul__(self, other):
        if isinstance(other, ShiftOp):
            return shift_mul(self, other)
        return self.scale(other)

    def truncate_below(self, floor) -> "ShiftOp":
        """Forget every coefficient below ``Lambda^floor``."""
        low = floor if self.low is None else max(self.low, floor)
        return ShiftOp(self.ring, dict(self.coeffs), self.E, low)

    def map_coeffs(self, fn) -> "ShiftOp":
        out = {m: fn(c) for m, c in self.coeffs.items()}
        E = min((c.E for c in out.values()), default=self.E)
        return ShiftOp(self.ring, out, E, self.low)

    def to_str(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m in self.powers():
            c = self.coeffs[m]
            parts.append(f"({c})*L{m}")
        return " + ".join(parts)

    __str__ = to_str

    def to_json(self) -> dict:
        return {str(m): self.coeffs[m].to_str() for m in self.powers()}

    def __repr__(self):
        return f"ShiftOp(E={self.E}, low={self.low}; {self.to_str()})"


def shift_mul(A: ShiftOp, B: ShiftOp, floor=None) -> ShiftOp:
    """Product ``A * B`` using ``(f L^m)(g L^n) = f * shift_m(g) L^(m+n)``.

    Only powers ``>= floor`` are computed; the result's exact window is the
    intersection of that with what the factors determine.
    """
    if A.ring != B.ring:
        raise ValueError("ring mismatch")
    E = min(A.E, B.E)
    tA, tB = A.top, B.top
    if tA is None or tB is None:
        return ShiftOp(A.ring, {}, E, None if floor is None else floor)
    lows = []
    if A.low is not None:
        lows.append(A.low + tB)
    if B.low is not None:
        lows.append(B.low + tA)
    if floor is not None:
        lows.append(floor)
    low = max(lows) if lows else None
    out: dict = {}
    shifted: dict = {}
    for m, f in A.coeffs.items():
        for n, g in B.coeffs.items():
            k = m + n
            if low is not None and k < low:
                continue
            key = (n, m)
            if key not in shifted:
                shifted[key] = g.truncate(E).exp_shift(m)
            term = f.truncate(E) * shifted[key]
            out[k] = term if k not in out else out[k] + term
    return ShiftOp(A.ring, out, E, low)


def plus_part(A: ShiftOp) -> ShiftOp:
    """``A_+``: drop negative powers.  The result is an exact finite operator."""
    if A.low is not None and A.low > 0:
        raise WindowError(f"plus part needs Lambda^0 exactly; known only down to Lambda^{A.low}")
    return ShiftOp(A.ring, {m: c for m, c in A.coeffs.items() if m >= 0}, A.E, None)


@lru_cache(maxsize=None)
def one_plus_shift_inverse(order: int) -> tuple:
    """Coefficients of ``(1 + Lambda)^-1 = 1/(1 + exp(i z))`` in ``z = eps dx``."""
    s = exp_series(I, order) + 1
    return tuple(s.inverse().coeffs)


def solve_one_plus_shift(c: DiffPoly) -> DiffPoly:
    """The unique ``x`` with ``(1 + Lambda) x = c``."""
    return c.apply_eps_series(one_plus_shift_inverse(c.E))


def _is_one(p: DiffPoly) -> bool:
    return p == p.ring.const(1, p.E)


def shift_sqrt(A: ShiftOp, depth: int) -> ShiftOp:
    """``B = Lambda + sum_{n<=0} b_n Lambda^n`` with ``B^2 = A``, for ``n >= -depth``."""
    if A.top != 2 or not _is_one(A[2]):
        raise ShapeError("square root needs a monic operator of top degree 2")
    if A.low is not None and A.low > 1 - depth:
        raise WindowError(f"depth {depth} needs A down to Lambda^{1 - depth}; known to Lambda^{A.low}")
    E = A.E
    b: dict = {}
    shifted: dict = {}

    def sh(k, j):
        key = (k, j)
        if key not in shifted:
            shifted[key] = b[k].exp_shift(j)
        return shifted[key]

    for n in range(0, -depth - 1, -1):
        rhs = A[n + 1]
        for j in range(n + 1, 1):
            k = n + 1 - j
            if k > 0 or k <= n:
                continue
            rhs = rhs - b[j] * sh(k, j)
        b[n] = solve_one_plus_shift(rhs)
    coeffs = {1: A.ring.const(1, E)}
    coeffs.update(b)
    return ShiftOp(A.ring, coeffs, E, -depth)


def commutator_over_ieps(A: ShiftOp, B: ShiftOp) -> ShiftOp:
    """``(i eps)^-1 [A, B]``; the eps^0 part of the commutator must vanish.

    The result is known one order of eps less than the inputs.
    """
    C = shift_mul(A, B) - shift_mul(B, A)
    out = {}
    for m, c in C.coeffs.items():
        if c.min_eps() == 0:
            raise ShapeError(f"commutator has a nonzero eps^0 part at Lambda^{m}")
        out[m] = c.divide_eps(1).scale(_NEG_I)
    E = C.E - 1
    return ShiftOp(A.ring, out, E, C.low)


def lax_operator(E: int, ring: Ring = UV) -> ShiftOp:
    """``Lambda^2 + ((v + Lambda v)/2) Lambda + u``."""
    u = ring.var(ring.names[0], 0, E)
    v = ring.var(ring.names[1], 0, E)
    return ShiftOp(ring, {2: ring.const(1, E), 1: (v + v.exp_shift(1)).scale(GaussianRational(1, 0) / 2), 0: u}, E)


def lax_power_plus(L: ShiftOp, d: int, depth: int | None = None) -> ShiftOp:
    """``(L^(d + 1/2))_+ = ((sqrt L)^(2d+1))_+``.

    A root of depth ``2d`` already determines the plus part; a larger
    ``depth`` gives the same answer.
    """
    if depth is None:
        depth = 2 * d
    if depth < 2 * d:
        raise WindowError(f"L^({d}+1/2)_+ needs root depth >= {2 * d}, got {depth}")
    B = shift_sqrt(L, depth)
    n = 2 * d + 1
    cur = B
    for step in range(2, n + 1):
        cur = shift_mul(cur, B, floor=-(n - step))
    return plus_part(cur)


@dataclass
class SymbolPoly:
    """Commutative Laurent polynomial ``sum_m c_m z^m`` with eps-free coefficients."""

    coeffs: dict

    def __post_init__(self):
        self.coeffs = {m: c for m, c in self.coeffs.items() if c}

    def __mul__(self, other: "SymbolPoly") -> "SymbolPoly":
        out: dict = {}
        for m, f in self.coeffs.items():
            for n, g in other.coeffs.items():
                t = f * g
                out[m + n] = t if m + n not in out else out[m + n] + t
        return SymbolPoly(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = -c if m not in out else out[m] - c
        return SymbolPoly(out)

    def __eq__(self, other):
        if not isinstance(other, SymbolPoly):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[m] == other[m] for m in keys)

    def __getitem__(self, m):
        c = self.coeffs.get(m)
        if c is None:
            ring = next(iter(self.coeffs.values())).ring if self.coeffs else UV
            return ring.zero(0)
        return c


def dispersionless_symbol(A: ShiftOp) -> SymbolPoly:
    """Set ``eps = 0`` and ``Lambda -> z``."""
    return SymbolPoly({m: c.at_eps0().truncate(0) for m, c in A.coeffs.items()})
