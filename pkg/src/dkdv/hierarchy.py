"""The discrete KdV flows, their extension, and changes of coordinates.

Charts:

* ``uv``  the Lax variables, ring ``UV``;
* ``uw``  ``v = R w``, where the commuting pair t^2_0, t^1_1 is simplest;
* ``w``   ``u = Linv w1``, ``v = Linv w2``;
* ``dr``  ``u = u1``, ``v = T u2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from gmpy2 import mpq

from .diffpoly import (
    DR,
    UV,
    UW,
    W12,
    DiffPoly,
    Flow,
    FlowError,
    Ring,
    _monomials,
    commutator_flows,
    factorial_rational,
)
from .evenop import EvenOp, NotNormalized, op_for_order
from .constants import lookup
from .linsolve import InconsistentSystem, solve_sparse
from .report import Report
from .scalar import GaussianRational
from .shiftring import (
    commutator_over_ieps,
    lax_operator,
    lax_power_plus,
    solve_one_plus_shift,
)

__all__ = [
    "ShapeViolation",
    "ReconstructionError",
    "Reconstruction",
    "double_factorial",
    "dkdv_flow",
    "build_QCB",
    "QCB",
    "uw_flows",
    "qcb_report",
    "shift_quotient_identity",
    "q_binomial_identity",
    "dk11_display",
    "topological_flows",
    "reconstruct_extended_flow",
    "extended_flow",
    "miura_transport",
    "to_chart",
    "CHART_MAPS",
    "dr_checks",
    "nogo_flows",
    "NogoResult",
    "nogo_check",
]


class ShapeViolation(FlowError):
    """A computed flow does not have a shape it is required to have."""

    def __init__(self, label, check, detail=""):
        self.label = label
        self.check = check
        super().__init__(f"flow {label}: {check}" + (f" ({detail})" if detail else ""))


class ReconstructionError(FlowError):
    def __init__(self, order, message, kernel_dim=None):
        self.order = order
        self.kernel_dim = kernel_dim
        super().__init__(f"eps^{order}: {message}")


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _half(p: DiffPoly) -> DiffPoly:
    return p.scale(GaussianRational(mpq(1, 2), 0))


# -- Lax flows ---------------------------------------------------------------


@lru_cache(maxsize=None)
def dkdv_flow(d: int, E: int = 6) -> Flow:
    """The flow ``d/dtau_d`` from ``dL/dtau_d = (i eps)^-1 2^d/(2d+1)!! [L^(d+1/2)_+, L]``.

    Returns a flow on ``(u, v)`` with ``potential = (0, DK_{2,d})``.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    label = ("tau", d)
    # the commutator loses one eps order to the division by i eps
    L = lax_operator(E + 1)
    P = lax_power_plus(L, d)
    C = commutator_over_ieps(P, L).scale(GaussianRational(mpq(2**d, double_factorial(2 * d + 1)), 0))
    for m in C.coeffs:
        if m not in (0, 1, 2):
            raise ShapeViolation(label, f"nonzero Lambda^{m} coefficient")
    if C[2]:
        raise ShapeViolation(label, "Lambda^2 coefficient is not zero")
    if C[0]:
        raise ShapeViolation(label, "du/dtau is not zero", str(C[0]))
    c1 = C[1]
    vt = solve_one_plus_shift(c1).scale(2)
    # the Lambda^1 coefficient must have the symmetric form (v_t + Lambda v_t)/2
    if _half(vt + vt.exp_shift(1)) != c1:
        raise ShapeViolation(label, "Lambda^1 coefficient is not of the form (x + Lambda x)/2")
    if not vt.is_real():
        raise ShapeViolation(label, "dv/dtau has imaginary coefficients")
    if not vt.is_even():
        raise ShapeViolation(label, "dv/dtau has odd powers of eps")
    pot = vt.integrate_x()
    if not pot.in_A0():
        raise ShapeViolation(label, "potential is not in A^[0]")
    if not pot.is_homogeneous("odeg", 2 * d + 2):
        raise ShapeViolation(label, f"potential is not of odeg {2 * d + 2}")
    zero = UV.zero(E)
    return Flow(label, UV, (zero, vt), (zero, pot), {"chart": "uv"})


# -- Q, C, B -----------------------------------------------------------------


@dataclass
class QCB:
    Q: DiffPoly
    C: DiffPoly
    B: DiffPoly
    Btilde: DiffPoly  # B - u w with u_n -> u_{n-1}


@lru_cache(maxsize=None)
def build_QCB(E: int = 6) -> QCB:
    """The polynomials that make ``t^2_0`` and ``t^1_1`` commute in the ``uw`` chart."""
    R = op_for_order("R", E)
    Rinv = op_for_order("Rinv", E)
    u = UW.var("u", 0, E)
    w = UW.var("w", 0, E)
    Rw = R(w)
    Rw2 = Rw * Rw
    Q = Rw2.scale(mpq(-1, 4))
    C = (
        (w * Rw2).scale(mpq(-1, 8))
        - Rinv(Rw2 * Rw).scale(mpq(1, 24))
        - (Rw * R(Rw2).dx_power(2)).times_eps(2).scale(mpq(1, 32))
    )
    B = _half(u * w) + _half(Rinv(u * Rw)) + (R(u).dx_power(2) * Rw).times_eps(2).scale(mpq(1, 8))
    Bt = (B - u * w).lower_jets("u")
    return QCB(Q, C, B, Bt)


def uw_flows(E: int = 6) -> tuple:
    """``t^2_0`` and ``t^1_1`` on ``(u, w)`` built from Q, C, B."""
    qcb = build_QCB(E)
    u = UW.var("u", 0, E)
    t20 = Flow.from_potentials(("t2", 0), UW, (UW.zero(E), qcb.Q + u), chart="uw")
    t11 = Flow.from_potentials(("t1", 1), UW, (_half(u * u), qcb.C + qcb.B), chart="uw")
    return t20, t11


def _swap_uw(p: DiffPoly) -> DiffPoly:
    return p.compose({"u": UW.var("w", 0, p.E), "w": UW.var("u", 0, p.E)}, UW)


def shift_quotient_identity(E: int = 8) -> tuple:
    """Both sides of ``K(uv + Ku Kv) = Ku v + u Kv`` with ``K = (Lambda-1)/(Lambda+1)``.

    ``K`` has symbol ``i tan(z/2)`` and is applied as an eps-series.
    """
    u = UW.var("u", 0, E)
    w = UW.var("w", 0, E)
    K = _shift_quotient(E)
    Ku, Kw = K(u), K(w)
    return K(u * w + Ku * Kw), Ku * w + u * Kw


def _shift_quotient(E):
    from .series import exp_series
    from .scalar import I

    e = exp_series(I, E + 1)
    coeffs = ((e - 1) / (e + 1)).coeffs

    def apply(p: DiffPoly) -> DiffPoly:
        return p.apply_eps_series(coeffs)

    return apply


def q_binomial_identity(E: int = 8) -> tuple:
    """Both sides of the binomial identity for ``dQ/dw_n``.

    ``sum_n sum_i C(n+1,i) dQ/dw_n u_{i-1} w_{n+1-i}
    = -1/2 Rw (Ru w + eps^2/4 dx R(Ru dx Rw))``.
    """
    from .diffpoly import binomial_sum

    R = op_for_order("R", E)
    Q = build_QCB(E).Q
    u = UW.var("u", 0, E)
    w = UW.var("w", 0, E)
    Ru, Rw = R(u), R(w)
    lhs = binomial_sum(Q, "w", u, w, shift=1)
    rhs = _half(Rw * (Ru * w + R(Ru * Rw.dx()).dx().times_eps(2).scale(mpq(1, 4)))).scale(-1)
    return lhs, rhs


def qcb_report(E: int = 8) -> Report:
    """The vanishing conditions for Q, C, B, plus antisymmetry and two auxiliary identities."""
    rep = Report(f"Q, C, B identities to eps^{E}")
    qcb = build_QCB(E)
    Q, C, B = qcb.Q, qcb.C, qcb.B
    u = UW.var("u", 0, E)
    w = UW.var("w", 0, E)
    zero = UW.zero(E)
    Qlin, Clin = Q.linearize("w"), C.linearize("w")
    Bu = lambda arg: B.compose({"u": u, "w": arg}, UW)  # noqa: E731
    P3 = (Bu(u.dx()) - u * u.dx()).dx()
    P2 = (Clin(u.dx()) + Bu(Q.dx()) - Qlin(B.dx())).dx()
    P1 = (Clin(Q.dx()) - Qlin(C.dx())).dx()
    rep.equal("P3 = dx[B(u, u_x) - u u_x] vanishes", P3, zero)
    rep.equal("P2 = dx[C_* u_x + B(u, dx Q) - Q_* dx B] vanishes", P2, zero)
    rep.equal("P1 = dx[C_* dx Q - Q_* dx C] vanishes", P1, zero)
    t20, t11 = uw_flows(E)
    comm = commutator_flows(t20, t11)[1].grade("odeg", "w")
    for k, P in ((4, P1), (2, P2), (0, P3)):
        part = comm.get(k, zero)
        rep.add(f"w-degree {k} part of the commutator is +-P{ {4: 1, 2: 2, 0: 3}[k]}", part == P or part == -P)
    rep.equal("commutator has no other w-degrees", sorted(set(comm) - {0, 2, 4}), [])
    rep.equal("Btilde(u, w) = -Btilde(w, u)", qcb.Btilde, -_swap_uw(qcb.Btilde))
    rep.equal("Q = -w^2/4 - eps^2/24 w w_xx + O(eps^4)", Q.truncate(3), ((w * w).scale(mpq(-1, 4)) - (w * w.dx_power(2)).times_eps(2).scale(mpq(1, 24))).truncate(3))
    rep.equal("C = -w^3/6 + O(eps^2)", C.truncate(1), (w ** 3).scale(mpq(-1, 6)).truncate(1))
    rep.equal("B = u w + O(eps^2)", B.truncate(1), (u * w).truncate(1))
    rep.add("Q, C, B lie in A^[0] with even eps powers", all(p.in_A0() and p.is_even() and p.is_real() for p in (Q, C, B)))
    rep.add("odeg Q = 2, odeg C = odeg B = 3", Q.is_homogeneous("odeg", 2) and C.is_homogeneous("odeg", 3) and B.is_homogeneous("odeg", 3))
    lhs, rhs = shift_quotient_identity(E)
    rep.equal("K(uv + Ku Kv) = Ku v + u Kv, K = (Lambda-1)/(Lambda+1)", lhs, rhs)
    lhs, rhs = q_binomial_identity(E)
    rep.equal("binomial sum of dQ/dw_n = -1/2 Rw (Ru w + eps^2/4 dx R(Ru dx Rw))", lhs, rhs)
    return rep


def dk11_display(E: int = 6) -> DiffPoly:
    """``DK_{1,1}`` written out on ``(u, v)``."""
    R = op_for_order("R", E)
    Rinv = op_for_order("Rinv", E)
    u = UV.var("u", 0, E)
    v = UV.var("v", 0, E)
    s = v * v - u.scale(4)
    return (
        (v * v * v).scale(mpq(-1, 24))
        + _half(u * v)
        - R(Rinv(v) * s).scale(mpq(1, 8))
        - R(v * R(s).dx_power(2)).times_eps(2).scale(mpq(1, 32))
    )


def topological_flows(E: int = 6) -> tuple:
    """``(t^2_0, t^1_1)`` on ``(u, v)`` from the closed formulas."""
    u = UV.var("u", 0, E)
    t20 = dkdv_flow(0, E)
    t20 = Flow(("t2", 0), UV, t20.rhs, t20.potential, {"chart": "uv"})
    t11 = Flow.from_potentials(("t1", 1), UV, (_half(u * u), dk11_display(E)), chart="uv")
    return t20, t11


# -- reconstruction ----------------------------------------------------------


@dataclass
class Reconstruction:
    """Result of solving for an extended flow potential in the ``uw`` chart."""

    d: int
    P: DiffPoly
    orders: list = field(default_factory=list)  # (eps power, unknowns, rank, kernel dim)

    @property
    def unique(self) -> bool:
        return all(k == 0 for _, _, _, k in self.orders)


def _ansatz(ring: Ring, odeg: int, p: int):
    """Monomials (jet tuples) of the given odeg with total jet order ``p``."""
    wu, ww = ring.weights
    out = []
    for ku in range(odeg // wu + 1):
        rest = odeg - wu * ku
        if rest % ww:
            continue
        kw = rest // ww
        degs = tuple((a, k) for a, k in ((0, ku), (1, kw)) if k)
        out.extend(_monomials(degs, p))
    return sorted(set(out))


def reconstruct_extended_flow(Q: DiffPoly, d: int, C0, E: int | None = None) -> Reconstruction:
    """Find ``P`` such that ``u_t = dx u^(d+1)/(d+1)!``, ``w_t = dx P`` commutes with
    ``u_t = 0``, ``w_t = dx Q + u_x``.

    ``P`` is sought in A^[0] with odeg ``2d+1`` and ``P(eps=0, u=0) = C0 w^(2d+1)``.
    Every eps order is solved as an exact linear system; a solution must exist
    and be unique, otherwise :class:`ReconstructionError` names the order.
    """
    ring = Q.ring
    if ring != UW:
        raise ValueError("reconstruction works on the (u, w) ring")
    E = Q.E if E is None else E
    Q = Q.truncate(E)
    u = ring.var("u", 0, E)
    w = ring.var("w", 0, E)
    if d == 0:
        return Reconstruction(0, w, [])
    if d < 0:
        raise ValueError("d must be nonnegative")
    Qlin = Q.linearize("w")
    drift = Q.dx() + u.dx()

    def phi(m: DiffPoly) -> DiffPoly:
        return Qlin(m.dx()) - m.linearize("w")(drift)

    odeg = 2 * d + 1
    seed_jets = (ring.jet("w"),) * odeg
    P = (w ** odeg).scale(C0)
    target = (u ** (d + 1)).dx().scale(-1 / factorial_rational(d + 1))
    residual = target - phi(P)
    orders = []
    for p in range(E + 1):
        cols = [j for j in _ansatz(ring, odeg, p) if not (p == 0 and j == seed_jets)]
        imgs = [phi(DiffPoly(ring, {(p, j): GaussianRational(1, 0)}, E)) for j in cols]
        for img in imgs:
            if img.min_eps() < p:
                raise ReconstructionError(p, "linearized commutator lowers the eps order")
        rows: dict = {}
        for c, img in enumerate(imgs):
            for key, val in img.terms.items():
                if key[0] == p:
                    rows.setdefault(key, {})[c] = val
        for key in residual.terms:
            if key[0] == p:
                rows.setdefault(key, {})
        keys = sorted(rows, key=lambda k: k[1])
        try:
            sol = solve_sparse([rows[k] for k in keys], [residual.terms.get(k, GaussianRational(0, 0)) for k in keys], list(range(len(cols))))
        except InconsistentSystem:
            raise ReconstructionError(p, "no solution") from None
        orders.append((p, len(cols), sol.rank, sol.kernel_dim))
        if sol.kernel_dim:
            raise ReconstructionError(p, f"solution not unique, kernel dimension {sol.kernel_dim}", sol.kernel_dim)
        for c, val in sol.values.items():
            term = DiffPoly(ring, {(p, cols[c]): val}, E)
            P = P + term
            residual = residual - imgs[c].scale(val)
    if residual:
        raise ReconstructionError(E, "residual left after the last order")
    return Reconstruction(d, P, orders)


def seed_constant(d: int):
    """``1/((-2)^d (2d+1)!!)``, the dispersionless normalization of ``DK_{1,d}``."""
    return mpq(1, (-2) ** d * double_factorial(2 * d + 1))


@lru_cache(maxsize=None)
def _reconstruction(d: int, E: int) -> Reconstruction:
    return reconstruct_extended_flow(build_QCB(E).Q, d, seed_constant(d), E)


@lru_cache(maxsize=None)
def extended_flow(d: int, E: int = 6) -> Flow:
    """The flow ``t^1_d`` on ``(u, v)``: ``u_t = dx u^(d+1)/(d+1)!``, ``v_t = dx DK_{1,d}``."""
    rec = _reconstruction(d, E)
    R = op_for_order("R", E)
    Rinv = op_for_order("Rinv", E)
    dk = R(rec.P.linear_substitute({"u": (None, "u"), "w": (Rinv, "v")}, UV))
    u = UV.var("u", 0, E)
    upot = (u ** (d + 1)).scale(1 / factorial_rational(d + 1))
    return Flow.from_potentials(("t1", d), UV, (upot, dk), chart="uv", reconstruction=rec)


# -- changes of coordinates --------------------------------------------------

CHART_MAPS = {
    "uv": None,
    "w": (W12, {"u": ("Linv", "w1"), "v": ("Linv", "w2")}),
    "dr": (DR, {"u": (None, "u1"), "v": ("T", "u2")}),
}

_INVERSE_NAME = {"L": "Linv", "Linv": "L", "R": "Rinv", "Rinv": "R", "T": "Tinv", "Tinv": "T"}


def _resolve(op, E):
    if op is None or isinstance(op, EvenOp):
        return op
    return op_for_order(op, E)


def _inverse(op, E):
    if op is None:
        return None
    if isinstance(op, str):
        return op_for_order(_INVERSE_NAME[op], E)
    try:
        return op.invert()
    except NotNormalized as exc:
        raise FlowError(f"change of variables is not invertible: {exc}") from None


def miura_transport(F: Flow, mapping: dict, target: Ring, chart: str | None = None) -> Flow:
    """Rewrite ``F`` in new variables given by ``old = op(new)``.

    ``mapping`` sends each old variable name to ``(op, new_name)``; ``op`` is
    an EvenOp, a named operator (``"L"``, ``"Tinv"``, ...) or ``None``.  The
    new right-hand side of ``new`` is ``op^-1`` applied to the substituted old
    right-hand side; potentials are transported the same way.
    """
    E = F.E
    if set(mapping) != set(F.ring.names):
        raise FlowError(f"map must cover {F.ring.names}, got {sorted(mapping)}")
    subst = {old: (_resolve(op, E), new) for old, (op, new) in mapping.items()}
    if sorted(new for _, new in subst.values()) != sorted(target.names):
        raise FlowError(f"map must hit every variable of {target.names}")
    rhs = [None] * target.N
    pots = [None] * target.N if F.potential is not None else None
    for old, (op, new) in mapping.items():
        a = F.ring.index(old)
        b = target.index(new)
        inv = _inverse(op, E)
        g = F.rhs[a].linear_substitute(subst, target)
        rhs[b] = g if inv is None else inv(g)
        if pots is not None:
            g = F.potential[a].linear_substitute(subst, target)
            pots[b] = g if inv is None else inv(g)
    meta = dict(F.meta)
    meta["chart"] = chart
    return Flow(F.label, target, tuple(rhs), None if pots is None else tuple(pots), meta)


def to_chart(F: Flow, chart: str) -> Flow:
    """Transport a flow given on ``(u, v)`` to one of the charts ``uv``, ``w``, ``dr``."""
    if F.ring != UV:
        raise FlowError("flows are transported from the (u, v) chart")
    if chart not in CHART_MAPS:
        raise ValueError(f"unknown chart {chart!r}; choose from {sorted(CHART_MAPS)}")
    if CHART_MAPS[chart] is None:
        return F
    ring, mapping = CHART_MAPS[chart]
    return miura_transport(F, mapping, ring, chart)


# -- the no-go computation ---------------------------------------------------


def nogo_flows(alpha, E: int = 6) -> tuple:
    """The pair of flows on ``(u1, u2)`` with dispersive parameter ``alpha``."""
    u1 = DR.var("u1", 0, E)
    u2 = DR.var("u2", 0, E)
    t20 = Flow.from_potentials(("t2", 0), DR, (DR.zero(E), (u2 * u2).scale(mpq(-1, 4)) + u1))
    t11 = Flow.from_potentials(
        ("t1", 1),
        DR,
        (
            _half(u1 * u1) + u1.dx_power(2).times_eps(2).scale(mpq(1, 24)),
            (u2 ** 3).scale(mpq(-1, 6)) + u1 * u2 + u2.dx_power(2).times_eps(2).scale(alpha),
        ),
    )
    return t20, t11


@dataclass
class NogoResult:
    c0: tuple  # commutator at alpha = 0
    c1: tuple  # its alpha-linear part
    affine: bool  # the commutator at alpha = 2 equals c0 + 2 c1
    solutions: object  # None: no alpha works; otherwise the forced value (or "all")
    witness: str  # a coefficient equation that rules alpha out

    @property
    def never_commute(self) -> bool:
        return self.affine and self.solutions is None


def nogo_check(E: int = 6) -> NogoResult:
    """Decide for which rational ``alpha`` the two flows of :func:`nogo_flows` commute."""
    comm = {a: commutator_flows(*nogo_flows(a, E)) for a in (0, 1, 2)}
    c0 = comm[0]
    c1 = tuple(p - q for p, q in zip(comm[1], c0))
    affine = all(p == q + r.scale(2) for p, q, r in zip(comm[2], c0, c1))
    forced = None
    witness = ""
    solutions: object = "all"
    for comp in range(DR.N):
        a0, a1 = c0[comp], c1[comp]
        for key in sorted(set(a0.terms) | set(a1.terms)):
            x0 = a0.terms.get(key, GaussianRational(0, 0))
            x1 = a1.terms.get(key, GaussianRational(0, 0))
            where = f"{DR.names[comp]}: coefficient of {a0.monomial_str(key[1], key[0])}"
            if not x1:
                if x0:
                    witness = f"{where} is {x0} for every alpha"
                    solutions = None
                    break
                continue
            value = -x0 / x1
            if forced is None:
                forced = (value, where)
                solutions = value
            elif value != forced[0]:
                witness = f"{forced[1]} forces alpha = {forced[0]}, {where} forces alpha = {value}"
                solutions = None
                break
        if solutions is None:
            break
    return NogoResult(c0, c1, affine, solutions, witness)


def dr_checks(E: int = 6) -> Report:
    """Dilaton identity and the fixed constants, for flows moved to the DR chart."""
    rep = Report(f"DR chart checks to eps^{E}")
    u1 = DR.var("u1", 0, E)
    u2 = DR.var("u2", 0, E)
    P10 = (u1, u2)
    P20 = to_chart(dkdv_flow(0, E), "dr").potential
    P11 = to_chart(extended_flow(1, E), "dr").potential
    Pb0 = {1: P10, 2: P20}
    for a in (1, 2):
        for b in (1, 2):
            lhs = P11[a - 1].partial0(f"u{b}")
            rhs = Pb0[b][a - 1].euler_D()
            rep.equal(f"dP^{a}_(1,1)/du^{b} = D P^{a}_({b},0)", lhs, rhs)
    rep.equal("P^1_(1,1) = (u1)^2/2", P11[0], _half(u1 * u1))
    rep.equal("P^1_(2,0) = 0", P20[0], DR.zero(E))
    T = op_for_order("T", E)
    lin = P20[1] - P20[1].set_zero("u1")
    rep.equal("u1-linear part of P^2_(2,0) is T u1", lin, T(u1))
    T1 = P20[1].coefficient([("u1", 2)], eps=2)
    rep.equal("T_1 = coefficient of eps^2 u1_2 in P^2_(2,0)", T1, lookup("T1"))
    want = (u2 * u2.dx_power(2)).scale(2) + u2.dx() * u2.dx()
    got = P20[1].set_zero("u1").coeff_eps(2)
    rep.equal("eps^2 part of P^2_(2,0)(u1 = 0)", got, want.scale(lookup("P2_20_eps2")))
    return rep
