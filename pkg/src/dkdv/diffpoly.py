"""Differential polynomials truncated in epsilon.

A :class:`DiffPoly` is a finite sum of monomials ``eps^p * prod w^a_n`` with
coefficients in Q(i).  Jet variables ``w^a_n`` are encoded as the integer
``a * JET_BASE + n`` and a monomial is the sorted tuple of its jet codes with
repetition, so ``u * v_x^2`` in the ``(u, v)`` ring is ``(0, 1001, 1001)``.

Every polynomial carries a truncation order ``E``: terms with ``eps^p``,
``p > E`` are unknown and never stored.  Binary operations keep the smaller
of the two orders.
"""

from __future__ import annotations

from bisect import insort
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb, factorial

from gmpy2 import mpq

from .linsolve import InconsistentSystem, solve_sparse
from .scalar import GaussianRational, I, Rational

__all__ = [
    "JET_BASE",
    "Ring",
    "RingMismatch",
    "DiffPoly",
    "LinearOperatorExpr",
    "Flow",
    "FlowError",
    "flow_derive",
    "commutator_flows",
    "NotTotalDerivative",
    "UV",
    "UW",
    "W12",
    "DR",
    "RINGS",
]

JET_BASE = 1000
DEFAULT_ORDER = 6


class RingMismatch(ValueError):
    pass


class NotTotalDerivative(ValueError):
    pass


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Dependent variables and their odeg weights."""

    names: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ValueError("one odeg weight per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")

    @property
    def N(self) -> int:
        return len(self.names)

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.N:
                raise KeyError(f"variable index {name} out of range for {self.names}")
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r} in ring {self.names}") from None

    def jet(self, name, order=0) -> int:
        return self.index(name) * JET_BASE + order

    def var(self, name, order=0, E=DEFAULT_ORDER) -> "DiffPoly":
        return DiffPoly(self, {(0, (self.jet(name, order),)): _ONE}, E)

    def const(self, c, E=DEFAULT_ORDER) -> "DiffPoly":
        c = _coerce(c)
        return DiffPoly(self, {(0, ()): c} if c else {}, E)

    def eps(self, power=1, E=DEFAULT_ORDER) -> "DiffPoly":
        return DiffPoly(self, {(power, ()): _ONE} if power <= E else {}, E)

    def zero(self, E=DEFAULT_ORDER) -> "DiffPoly":
        return DiffPoly(self, {}, E)

    def jet_name(self, code: int) -> str:
        a, n = divmod(code, JET_BASE)
        return self.names[a] if n == 0 else f"{self.names[a]}_{n}"

    def __str__(self):
        return "(" + ", ".join(self.names) + ")"


UV = Ring(("u", "v"), (2, 1))
UW = Ring(("u", "w"), (2, 1))
W12 = Ring(("w1", "w2"), (2, 1))
DR = Ring(("u1", "u2"), (2, 1))
RINGS = {"uv": UV, "uw": UW, "w": W12, "dr": DR}

_ONE = GaussianRational(1, 0)
_ZERO = GaussianRational(0, 0)


def _coerce(c) -> GaussianRational:
    if type(c) is GaussianRational:
        return c
    return GaussianRational.coerce(c)


def _var_of(code: int) -> int:
    return code // JET_BASE


def _replace_one(jets: tuple, idx: int, new: int) -> tuple:
    rest = list(jets[:idx] + jets[idx + 1 :])
    insort(rest, new)
    return tuple(rest)


class DiffPoly:
    """Element of the epsilon-truncated ring of differential polynomials."""

    __slots__ = ("ring", "terms", "E", "_dx")

    def __init__(self, ring: Ring, terms: dict, E: int = DEFAULT_ORDER):
        self.ring = ring
        self.E = E
        self.terms = {k: v for k, v in terms.items() if v and k[0] <= E}
        self._dx = None

    @classmethod
    def _make(cls, ring, terms, E):
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj.E = E
        obj._dx = None
        return obj

    # -- basic protocol ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "DiffPoly"):
        if self.ring != other.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other):
        if isinstance(other, DiffPoly):
            self._check(other)
            return other
        return self.ring.const(other, self.E)

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            if self.ring != other.ring:
                return False
            E = min(self.E, other.E)
            return self.truncate(E).terms == other.truncate(E).terms
        if isinstance(other, (int, Rational, GaussianRational)):
            return self == self.ring.const(other, self.E)
        return NotImplemented

    __hash__ = None

    def truncate(self, E: int) -> "DiffPoly":
        if E >= self.E:
            return self if E == self.E else DiffPoly._make(self.ring, self.terms, self.E)
        return DiffPoly._make(self.ring, {k: v for k, v in self.terms.items() if k[0] <= E}, E)

    def with_order(self, E: int) -> "DiffPoly":
        """Relabel the truncation order (only valid when the data is exact there)."""
        return DiffPoly(self.ring, self.terms, E)

    def copy_to_ring(self, ring: Ring) -> "DiffPoly":
        """Reinterpret in a ring with the same variables in the same positions."""
        if len(ring.names) < len(self.ring.names):
            raise RingMismatch("target ring has fewer variables")
        return DiffPoly._make(ring, dict(self.terms), self.E)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        E = min(self.E, other.E)
        out = {k: v for k, v in self.terms.items() if k[0] <= E}
        for k, v in other.terms.items():
            if k[0] > E:
                continue
            nv = out.get(k)
            nv = v if nv is None else nv + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return DiffPoly._make(self.ring, out, E)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._make(self.ring, {k: -v for k, v in self.terms.items()}, self.E)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "DiffPoly":
        if isinstance(c, (int, Rational)):
            if not c:
                return DiffPoly._make(self.ring, {}, self.E)
            return DiffPoly._make(self.ring, {k: v * c for k, v in self.terms.items()}, self.E)
        c = _coerce(c)
        if not c:
            return DiffPoly._make(self.ring, {}, self.E)
        return DiffPoly._make(self.ring, {k: v * c for k, v in self.terms.items()}, self.E)

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            if isinstance(other, (int, Rational, GaussianRational)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        E = min(self.E, other.E)
        out = {}
        b_items = sorted(other.terms.items(), key=lambda kv: kv[0][0])
        for (e1, j1), c1 in self.terms.items():
            room = E - e1
            if room < 0:
                continue
            for (e2, j2), c2 in b_items:
                if e2 > room:
                    break
                key = (e1 + e2, tuple(sorted(j1 + j2)) if j1 and j2 else j1 or j2)
                c = c1 * c2
                old = out.get(key)
                if old is None:
                    out[key] = c
                else:
                    nv = old + c
                    if nv:
                        out[key] = nv
                    else:
                        del out[key]
        return DiffPoly._make(self.ring, out, E)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, DiffPoly):
            return NotImplemented
        return self.scale(1 / _coerce(c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not differential polynomials")
        out = self.ring.const(1, self.E)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def times_eps(self, k: int = 1) -> "DiffPoly":
        """Multiply by ``eps^k`` (the truncation order is unchanged)."""
        E = self.E
        return DiffPoly._make(
            self.ring, {(e + k, j): c for (e, j), c in self.terms.items() if e + k <= E}, E
        )

    def divide_eps(self, k: int = 1) -> "DiffPoly":
        """Exact division by ``eps^k``; lowers the truncation order by ``k``."""
        if any(e < k for e, _ in self.terms):
            raise ValueError(f"polynomial is not divisible by eps^{k}")
        return DiffPoly._make(self.ring, {(e - k, j): c for (e, j), c in self.terms.items()}, self.E - k)

    # -- x-derivative and constant-coefficient operators ------------------
    def dx(self) -> "DiffPoly":
        out = {}
        for (e, jets), c in self.terms.items():
            prev = None
            for idx, j in enumerate(jets):
                if j == prev:
                    continue
                prev = j
                mult = jets.count(j)
                key = (e, _replace_one(jets, idx, j + 1))
                v = c * mult if mult != 1 else c
                old = out.get(key)
                if old is None:
                    out[key] = v
                else:
                    nv = old + v
                    if nv:
                        out[key] = nv
                    else:
                        del out[key]
        return DiffPoly._make(self.ring, out, self.E)

    def dx_power(self, n: int) -> "DiffPoly":
        """``dx^n`` applied to self, memoized on the instance."""
        if self._dx is None:
            self._dx = [self]
        cache = self._dx
        while len(cache) <= n:
            cache.append(cache[-1].dx())
        return cache[n]

    def min_eps(self) -> int:
        return min((e for e, _ in self.terms), default=self.E + 1)

    def apply_eps_series(self, coeffs) -> "DiffPoly":
        """Apply ``sum_k coeffs[k] (eps dx)^k``.

        Terms of the series beyond ``len(coeffs)`` must not matter at the
        retained order; callers pass at least ``E + 1`` coefficients.
        """
        lo = self.min_eps()
        top = self.E - lo
        if len(coeffs) < top + 1:
            raise ValueError(f"operator known to (eps dx)^{len(coeffs) - 1}, need {top}")
        out = self.ring.zero(self.E)
        for k in range(top + 1):
            c = coeffs[k]
            if not c:
                continue
            out = out + self.dx_power(k).times_eps(k).scale(c)
        return out

    def exp_shift(self, m: int) -> "DiffPoly":
        """``exp(i m eps dx)`` applied to self, i.e. the shift by ``m`` steps."""
        if m == 0:
            return self
        top = self.E - self.min_eps()
        im = I * m
        coeffs = [_ONE]
        for k in range(1, top + 1):
            coeffs.append(coeffs[-1] * im / k)
        return self.apply_eps_series(coeffs)

    # -- partial derivatives ----------------------------------------------
    def partial(self, var, order: int = 0) -> "DiffPoly":
        """Derivative with respect to the jet variable ``var_order``."""
        code = self.ring.jet(var, order)
        out = {}
        for (e, jets), c in self.terms.items():
            mult = jets.count(code)
            if not mult:
                continue
            idx = jets.index(code)
            key = (e, jets[:idx] + jets[idx + 1 :])
            out[key] = c * mult if mult != 1 else c
        return DiffPoly._make(self.ring, out, self.E)

    def partial0(self, var) -> "DiffPoly":
        return self.partial(var, 0)

    def jets(self) -> set:
        """Jet codes that occur in some monomial."""
        return {j for _, js in self.terms for j in js}

    def variables(self) -> set:
        return {_var_of(j) for j in self.jets()}

    def linearize(self, var=None) -> "LinearOperatorExpr":
        """The linearization ``f_* = sum_n (df/dw_n) dx^n`` (per variable)."""
        which = None if var is None else self.ring.index(var)
        entries = {}
        for code in sorted(self.jets()):
            a, n = divmod(code, JET_BASE)
            if which is not None and a != which:
                continue
            entries[(a, n)] = self.partial(a, n)
        return LinearOperatorExpr(self.ring, entries)

    def euler_D(self) -> "DiffPoly":
        """``eps d/deps + sum u_n d/du_n``: scales each monomial by eps power plus degree."""
        return DiffPoly._make(
            self.ring,
            {k: c * (k[0] + len(k[1])) for k, c in self.terms.items() if k[0] + len(k[1])},
            self.E,
        )

    # -- gradings ---------------------------------------------------------
    def _weight(self, key, kind, var=None):
        e, jets = key
        if kind == "deg":
            return sum(j % JET_BASE for j in jets) - e
        if kind == "odeg":
            w = self.ring.weights
            if var is None:
                return sum(w[_var_of(j)] for j in jets)
            a = self.ring.index(var)
            return w[a] * sum(1 for j in jets if _var_of(j) == a)
        if kind == "eps":
            return e
        raise ValueError(f"unknown grading {kind!r}")

    def grade(self, kind: str = "odeg", var=None) -> dict:
        """Split into homogeneous components ``{weight: DiffPoly}``.

        ``kind`` is ``"deg"`` (jet order minus eps power), ``"odeg"`` (the
        weighted polynomial degree; restricted to one variable if ``var`` is
        given) or ``"eps"``.
        """
        parts: dict = {}
        for key, c in self.terms.items():
            parts.setdefault(self._weight(key, kind, var), {})[key] = c
        return {w: DiffPoly._make(self.ring, t, self.E) for w, t in sorted(parts.items())}

    def is_homogeneous(self, kind: str = "odeg", weight=None, var=None) -> bool:
        ws = {self._weight(k, kind, var) for k in self.terms}
        if weight is None:
            return len(ws) <= 1
        return ws <= {weight}

    def in_A0(self) -> bool:
        """Every monomial has eps power equal to its total jet order."""
        return self.is_homogeneous("deg", 0)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def is_even(self) -> bool:
        """Only even powers of eps occur."""
        return all(e % 2 == 0 for e, _ in self.terms)

    def coeff_eps(self, k: int) -> "DiffPoly":
        """The eps^k coefficient, as an eps-free polynomial."""
        return DiffPoly._make(self.ring, {(0, j): c for (e, j), c in self.terms.items() if e == k}, self.E)

    def eps_part(self, k: int) -> "DiffPoly":
        """The eps^k terms, eps factor kept."""
        return DiffPoly._make(self.ring, {key: c for key, c in self.terms.items() if key[0] == k}, self.E)

    def at_eps0(self) -> "DiffPoly":
        return self.coeff_eps(0)

    def set_zero(self, var) -> "DiffPoly":
        """Substitute ``var = 0`` (and hence all its jets)."""
        a = self.ring.index(var)
        return DiffPoly._make(
            self.ring,
            {k: c for k, c in self.terms.items() if all(_var_of(j) != a for j in k[1])},
            self.E,
        )

    def coefficient(self, monomial, eps: int = 0):
        """Coefficient of ``eps^eps * monomial``; ``monomial`` is a list of (var, order)."""
        jets = tuple(sorted(self.ring.jet(v, n) for v, n in monomial))
        return self.terms.get((eps, jets), _ZERO)

    # -- substitutions ----------------------------------------------------
    def compose(self, images: dict, target: Ring | None = None) -> "DiffPoly":
        """Substitute ``w^a_n -> dx^n(images[w^a])``.

        ``images`` maps variable names (or indices) of this ring to
        polynomials of the ``target`` ring.
        """
        imgs = {}
        for name, img in images.items():
            imgs[self.ring.index(name)] = img
        if target is None:
            target = next(iter(imgs.values())).ring if imgs else self.ring
        E = min([self.E] + [p.E for p in imgs.values()])
        used = {_var_of(j) for j in self.jets()}
        missing = used - set(imgs)
        if missing:
            raise KeyError(f"no image for variables {[self.ring.names[a] for a in sorted(missing)]}")
        for p in imgs.values():
            if p.ring != target:
                raise RingMismatch("all images must live in the target ring")
        cache: dict = {}
        out = target.zero(E)
        for (e, jets), c in self.terms.items():
            if e > E:
                continue
            term = target.eps(e, E).scale(c)
            for code, mult in Counter(jets).items():
                a, n = divmod(code, JET_BASE)
                key = (code, mult)
                if key not in cache:
                    cache[key] = imgs[a].dx_power(n) ** mult
                term = term * cache[key]
                if not term:
                    break
            out = out + term
        return out

    def linear_substitute(self, mapping: dict, target: Ring) -> "DiffPoly":
        """Substitute each old variable by ``op(new variable)``.

        ``mapping`` sends an old variable name to ``(op, new_name)`` where
        ``op`` is an :class:`~dkdv.evenop.EvenOp` or ``None`` for identity.
        """
        images = {}
        for old, (op, new) in mapping.items():
            base = target.var(new, 0, self.E)
            images[old] = base if op is None else op.apply(base)
        for a in self.variables():
            if a not in {self.ring.index(k) for k in images}:
                raise KeyError(f"map does not cover variable {self.ring.names[a]!r}")
        return self.compose(images, target)

    def lower_jets(self, var) -> "DiffPoly":
        """Replace ``var_n`` by ``var_{n-1}``; ``var`` must not occur undifferentiated."""
        a = self.ring.index(var)
        out = {}
        for (e, jets), c in self.terms.items():
            new = []
            for j in jets:
                if _var_of(j) == a:
                    if j % JET_BASE == 0:
                        raise ValueError(f"{self.ring.names[a]} occurs without derivatives")
                    new.append(j - 1)
                else:
                    new.append(j)
            out[(e, tuple(sorted(new)))] = c
        return DiffPoly._make(self.ring, out, self.E)

    def integrate_x(self) -> "DiffPoly":
        """The unique ``f`` without constant term with ``dx f == self``.

        Raises :class:`NotTotalDerivative` if there is none.
        """
        groups: dict = {}
        for key, c in self.terms.items():
            groups.setdefault(_component_key(key), {})[key] = c
        out = {}
        for (e, degs, weight), part in groups.items():
            if weight == 0:
                raise NotTotalDerivative("terms without derivatives are not total derivatives")
            cands = list(_monomials(degs, weight - 1))
            rows: dict = {}
            for col, jets in enumerate(cands):
                img = DiffPoly._make(self.ring, {(e, jets): _ONE}, self.E).dx()
                for k, v in img.terms.items():
                    rows.setdefault(k, {})[col] = v
            for k in part:
                rows.setdefault(k, {})
            keys = list(rows)
            try:
                sol = solve_sparse([rows[k] for k in keys], [part.get(k, _ZERO) for k in keys], list(range(len(cands))))
            except InconsistentSystem:
                raise NotTotalDerivative(
                    f"eps^{e} component of weight {weight} is not a total x-derivative"
                ) from None
            for col, v in sol.values.items():
                out[(e, cands[col])] = v
        return DiffPoly._make(self.ring, out, self.E)

    # -- text -------------------------------------------------------------
    def monomial_str(self, jets: tuple, eps: int = 0) -> str:
        parts = []
        if eps:
            parts.append("ep" if eps == 1 else f"ep^{eps}")
        for code, mult in sorted(Counter(jets).items()):
            name = self.ring.jet_name(code)
            parts.append(name if mult == 1 else f"{name}^{mult}")
        return "*".join(parts)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: term_order_key(kv[0]))

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for (e, jets), c in self.sorted_terms():
            pieces.append(_term_str(c, self.monomial_str(jets, e)))
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __str__ = to_str

    def __repr__(self):
        return f"DiffPoly[{','.join(self.ring.names)}; E={self.E}]({self.to_str()})"


def term_order_key(key):
    """Ascending eps power, then higher degree first, then lex on jets."""
    e, jets = key
    lex = []
    for code, mult in sorted(Counter(jets).items()):
        lex.append((code, -mult))
    lex.append((float("inf"), 0))
    return (e, -len(jets), tuple(lex))


def _term_str(c: GaussianRational, mono: str) -> str:
    if not mono:
        return str(c)
    if c.is_real():
        if c.re == 1:
            return mono
        if c.re == -1:
            return "-" + mono
        return f"{c}*{mono}"
    if not c.re:
        if c.im == 1:
            return "I*" + mono
        if c.im == -1:
            return "-I*" + mono
        return f"{c}*{mono}"
    return f"({c})*{mono}"


def _component_key(key):
    e, jets = key
    degs = Counter(_var_of(j) for j in jets)
    weight = sum(j % JET_BASE for j in jets)
    return (e, tuple(sorted(degs.items())), weight)


def _multisets(k: int, total: int):
    """Sorted k-tuples of nonnegative ints summing to total."""
    if k == 0:
        if total == 0:
            yield ()
        return
    for combo in combinations_with_replacement(range(total + 1), k):
        if sum(combo) == total:
            yield combo


def _monomials(degs: tuple, weight: int):
    """Monomials with the given per-variable degrees and total jet order."""
    degs = list(degs)

    def rec(i, left):
        if i == len(degs):
            if left == 0:
                yield ()
            return
        a, k = degs[i]
        for w in range(left + 1):
            if i == len(degs) - 1 and w != left:
                continue
            for ms in _multisets(k, w):
                head = tuple(a * JET_BASE + n for n in ms)
                for tail in rec(i + 1, left - w):
                    yield head + tail

    for jets in rec(0, weight):
        yield tuple(sorted(jets))


class LinearOperatorExpr:
    """A linear differential operator ``g -> sum_(a,n) coeff[a,n] * dx^n g^a``."""

    def __init__(self, ring: Ring, entries: dict):
        self.ring = ring
        self.entries = {k: v for k, v in entries.items() if v}

    def terms(self):
        """``[(coefficient, var, dx_power)]`` in canonical order."""
        return [(c, self.ring.names[a], n) for (a, n), c in sorted(self.entries.items())]

    def __call__(self, *args, **kwargs):
        """Apply to one polynomial per variable (positional or by name).

        With a single positional argument on an operator that involves only
        one variable, that polynomial is used for it.
        """
        if len(args) == 1 and not kwargs and len({a for a, _ in self.entries}) <= 1:
            targets = {a: args[0] for a, _ in self.entries}
        else:
            targets = {self.ring.index(k): v for k, v in kwargs.items()}
            targets.update({i: v for i, v in enumerate(args)})
        out = None
        for (a, n), c in self.entries.items():
            if a not in targets:
                raise KeyError(f"no argument for variable {self.ring.names[a]!r}")
            piece = c * targets[a].dx_power(n)
            out = piece if out is None else out + piece
        if out is None:
            g = next(iter(targets.values())) if targets else None
            return self.ring.zero(g.E if g is not None else DEFAULT_ORDER)
        return out


@dataclass
class Flow:
    """An evolutionary vector field ``d w^a / dt = rhs[a]``.

    ``potential[a]`` (when known) satisfies ``rhs[a] == dx(potential[a])``.
    """

    label: tuple
    ring: Ring
    rhs: tuple
    potential: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rhs = tuple(self.rhs)
        if len(self.rhs) != self.ring.N:
            raise FlowError(f"flow needs {self.ring.N} right-hand sides, got {len(self.rhs)}")
        if self.potential is not None:
            self.potential = tuple(self.potential)

    @classmethod
    def from_potentials(cls, label, ring, potentials, **meta):
        pots = tuple(potentials)
        return cls(label, ring, tuple(p.dx() for p in pots), pots, dict(meta))

    @property
    def E(self) -> int:
        return min(p.E for p in self.rhs)

    def truncate(self, E: int) -> "Flow":
        return Flow(
            self.label,
            self.ring,
            tuple(p.truncate(E) for p in self.rhs),
            None if self.potential is None else tuple(p.truncate(E) for p in self.potential),
            dict(self.meta),
        )

    def __getitem__(self, name) -> DiffPoly:
        return self.rhs[self.ring.index(name)]


def flow_derive(flow: Flow, g: DiffPoly) -> DiffPoly:
    """Derivative of ``g`` along ``flow``: ``sum (dg/dw^a_n) dx^n F^a``."""
    if g.ring != flow.ring:
        raise RingMismatch(f"ring mismatch: {g.ring} vs {flow.ring}")
    E = min(g.E, flow.E)
    out = flow.ring.zero(E)
    for code in sorted(g.jets()):
        a, n = divmod(code, JET_BASE)
        rhs = flow.rhs[a]
        if rhs is None:
            raise FlowError(f"flow has no right-hand side for {flow.ring.names[a]!r}")
        out = out + g.partial(a, n) * rhs.dx_power(n)
    return out


def commutator_flows(F: Flow, G: Flow) -> tuple:
    """``D_F(G^a) - D_G(F^a)`` for every variable ``a``."""
    if F.ring != G.ring:
        raise RingMismatch(f"ring mismatch: {F.ring} vs {G.ring}")
    return tuple(flow_derive(F, g) - flow_derive(G, f) for f, g in zip(F.rhs, G.rhs))


def binomial_sum(Q: DiffPoly, var_w, first: DiffPoly, second: DiffPoly, shift: int = 1) -> DiffPoly:
    """``sum_n sum_{i=1}^{n+1} C(n+1, i) (dQ/dw_n) dx^(i-shift) first * dx^(n+1-i) second``."""
    w = Q.ring.index(var_w)
    out = Q.ring.zero(min(Q.E, first.E, second.E))
    for code in sorted(Q.jets()):
        a, n = divmod(code, JET_BASE)
        if a != w:
            continue
        dQ = Q.partial(a, n)
        for i in range(1, n + 2):
            out = out + (dQ * first.dx_power(i - shift) * second.dx_power(n + 1 - i)).scale(comb(n + 1, i))
    return out


def factorial_rational(n: int) -> Rational:
    return mpq(factorial(n))
