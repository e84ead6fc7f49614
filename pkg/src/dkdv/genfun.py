"""Genus-zero data and generating-series relations.

The flat F-manifold is given by a vector potential ``F^a(v1, v2)``; its
structure constants ``c^a_bc = d^2 F^a / dv^b dv^c`` drive the recursion for
the dispersionless flow densities.  The second half of the module checks the
relations among the even series ``I1, I2, Xhat, Lhat, That`` in ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .constants import CONSTANTS, lookup
from .diffpoly import JET_BASE, DiffPoly, Ring
from .evenop import make_named
from .hierarchy import double_factorial, dkdv_flow, extended_flow, to_chart
from .report import Report
from .scalar import I
from .series import TaylorSeries, cos_series, exp_series

__all__ = [
    "FM",
    "VectorPotential",
    "PrincipalDensity",
    "IntegrabilityError",
    "potential_extended_2spin",
    "oriented_associativity_check",
    "principal_density",
    "density_closed_form",
    "density_report",
    "flow_density_report",
    "named_series",
    "series_relations_check",
    "reference_constants",
]

FM = Ring(("v1", "v2"), (2, 1))


class IntegrabilityError(ValueError):
    pass


def _poly(terms: dict) -> DiffPoly:
    """Polynomial in v1, v2 from ``{(k1, k2): coeff}``."""
    out = FM.zero(0)
    v1, v2 = FM.var("v1", 0, 0), FM.var("v2", 0, 0)
    for (k1, k2), c in terms.items():
        out = out + (v1 ** k1 * v2 ** k2).scale(c)
    return out


@dataclass(frozen=True)
class VectorPotential:
    F: tuple  # F^1, F^2 as eps-free polynomials in FM

    def c(self, a: int, b: int, g: int) -> DiffPoly:
        """``c^a_bg``, indices 1-based."""
        return self.F[a - 1].partial0(b - 1).partial0(g - 1)

    @property
    def n(self) -> int:
        return len(self.F)


def potential_extended_2spin() -> VectorPotential:
    """``F^1 = (v1)^2/2``, ``F^2 = v1 v2 - (v2)^3/12``."""
    return VectorPotential((_poly({(2, 0): mpq(1, 2)}), _poly({(1, 1): 1, (0, 3): mpq(-1, 12)})))


def oriented_associativity_check(P: VectorPotential) -> Report:
    rep = Report("oriented associativity")
    n = P.n
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            want = FM.const(1 if a == b else 0, 0)
            rep.equal(f"unit: c^{a}_1{b} = delta", P.c(a, 1, b), want)
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            for g in range(1, n + 1):
                for dl in range(1, n + 1):
                    if b >= g:
                        continue
                    lhs = sum((P.c(a, b, m) * P.c(m, g, dl) for m in range(1, n + 1)), FM.zero(0))
                    rhs = sum((P.c(a, g, m) * P.c(m, b, dl) for m in range(1, n + 1)), FM.zero(0))
                    rep.equal(f"c^{a}_{b}m c^m_{g}{dl} symmetric in ({b},{g})", lhs, rhs)
    return rep


@dataclass(frozen=True)
class PrincipalDensity:
    poly: DiffPoly
    alpha: int
    beta: int
    d: int


def _antiderivative(p: DiffPoly, var: int) -> DiffPoly:
    """Integrate in the jet-0 variable ``var``; no constant of integration."""
    code = var * JET_BASE
    out = {}
    for (e, jets), c in p.terms.items():
        k = jets.count(code)
        out[(e, tuple(sorted(jets + (code,))))] = c * mpq(1, k + 1)
    return DiffPoly(FM, out, p.E)


def _integrate_gradient(g1: DiffPoly, g2: DiffPoly, label) -> DiffPoly:
    if g1.partial0(1) != g2.partial0(0):
        raise IntegrabilityError(f"{label}: mixed partials differ")
    a = _antiderivative(g1, 0)
    a = a + _antiderivative(g2 - a.partial0(1), 1)
    b = _antiderivative(g2, 1)
    b = b + _antiderivative(g1 - b.partial0(0), 0)
    if a != b:
        raise IntegrabilityError(f"{label}: integration order changes the result")
    return a


def principal_density(P: VectorPotential, alpha: int, beta: int, d: int) -> PrincipalDensity:
    """``psi^alpha_{beta,d}``: ``psi_{beta,0} = dF/dv^beta`` and
    ``d psi^a_{b,d} / dv^g = c^a_gm psi^m_{b,d-1}``, vanishing at the origin."""
    return PrincipalDensity(_densities(P, beta, d)[alpha - 1], alpha, beta, d)


def _densities(P: VectorPotential, beta: int, d: int) -> tuple:
    if d == 0:
        return tuple(F.partial0(beta - 1) for F in P.F)
    prev = _densities(P, beta, d - 1)
    out = []
    for a in range(1, P.n + 1):
        grad = [sum((P.c(a, g, m) * prev[m - 1] for m in range(1, P.n + 1)), FM.zero(0)) for g in (1, 2)]
        out.append(_integrate_gradient(grad[0], grad[1], (a, beta, d)))
    return tuple(out)


def density_closed_form(alpha: int, beta: int, d: int) -> DiffPoly:
    """Known closed forms.  For ``alpha = 2`` this is the restriction to ``v1 = 0``,
    except ``psi^2_{2,0}``, which is given in full."""
    v1, v2 = FM.var("v1", 0, 0), FM.var("v2", 0, 0)
    if alpha == 1:
        if beta == 1:
            return (v1 ** (d + 1)).scale(mpq(1, factorial(d + 1)))
        return FM.zero(0)
    k = 2 * d + beta
    out = (v2 ** k).scale(mpq(1, (-2) ** (d + beta - 1) * double_factorial(k)))
    if d == 0 and beta == 2:
        out = out + v1
    return out


def density_report(P: VectorPotential | None = None, dmax: int = 3) -> Report:
    """Compare the recursion with the closed forms for ``d <= dmax``."""
    P = potential_extended_2spin() if P is None else P
    rep = Report(f"principal densities against closed forms, d <= {dmax}")
    for beta in (1, 2):
        for d in range(dmax + 1):
            for alpha in (1, 2):
                psi = principal_density(P, alpha, beta, d).poly
                if alpha == 2 and (beta, d) != (2, 0):
                    psi = psi.set_zero("v1")
                    name = f"psi^2_({beta},{d}) at v1 = 0"
                else:
                    name = f"psi^{alpha}_({beta},{d})"
                rep.equal(name, psi, density_closed_form(alpha, beta, d))
            odeg = 2 * d + beta
            psi2 = principal_density(P, 2, beta, d).poly
            rep.add(f"psi^2_({beta},{d}) has odeg {odeg}", psi2.is_homogeneous("odeg", odeg))
    return rep


def flow_density_report(E: int = 6, tau_max: int = 3, ext_max: int = 2) -> Report:
    """eps = 0 potentials of the computed flows, in the (w1, w2) chart, against the densities."""
    P = potential_extended_2spin()
    rep = Report("dispersionless limits of the computed flows")
    flows = [(2, d, dkdv_flow(d, E)) for d in range(tau_max + 1)]
    flows += [(1, d, extended_flow(d, E)) for d in range(ext_max + 1)]
    for beta, d, F in flows:
        G = to_chart(F, "w")
        for alpha in (1, 2):
            lim = G.potential[alpha - 1].at_eps0().copy_to_ring(FM)
            rep.equal(f"{F.label[0]}_{F.label[1]}: potential {alpha} at eps = 0 is psi^{alpha}_({beta},{d})", lim, principal_density(P, alpha, beta, d).poly)
    return rep


# -- series ------------------------------------------------------------------


def _sec_half(N: int) -> TaylorSeries:
    return cos_series(mpq(1, 2), N).inverse()


def _I1_raw(N: int) -> TaylorSeries:
    # 2 (e^{iz} - 1) / ((e^{iz/2} - e^{-iz/2}) (e^{iz} + 1))
    h = I * mpq(1, 2)
    e = exp_series(I, N + 1)
    num = ((e - 1) * 2).divide_by_z()
    den = (exp_series(h, N + 1) - exp_series(-h, N + 1)).divide_by_z() * (e + 1)
    return (num / den).truncate(N).real()


def named_series(name: str, G: int) -> TaylorSeries:
    """One of ``L, R, X, T, Lhat, Xhat, That, I1, I2`` through ``z^(2G)``."""
    N = 2 * G
    if name in ("L", "R", "X", "T", "Lhat", "Xhat", "That"):
        return make_named(name.removesuffix("hat"), G).hat_series()
    if name == "I1":
        return _sec_half(N)
    if name == "I2":
        return make_named("L", G).hat_series() * make_named("T", G).hat_series()
    raise KeyError(f"unknown series {name!r}")


SERIES_NAMES = ("L", "R", "X", "T", "I1", "I2", "Xhat", "Lhat", "That")


def series_relations_check(G: int = 5) -> Report:
    N = 2 * G
    rep = Report(f"series relations through z^{N}")
    X, L, T = (make_named(n, G).hat_series() for n in ("X", "L", "T"))
    R = make_named("R", G).hat_series()
    I1, I2 = named_series("I1", G), named_series("I2", G)
    rep.equal("I1 closed form simplifies to sec(z/2)", _I1_raw(N), I1)
    rep.equal("I1 = Xhat Lhat", I1, X * L)
    rep.equal("I2 = That^-1 I1", I2, T.inverse() * I1)
    rep.equal("I2^2 = Lhat I1", I2 * I2, L * I1)
    rep.equal("I2 = sqrt(Lhat I1) with I2(0) = 1", I2, (L * I1).sqrt())
    rep.equal("I_{2,1}", I2[2], lookup("I21"))
    rep.equal("I2 = 1 + (1 + theta^2)/24 z^2 + O(z^4), theta = 1", I2.truncate(3), TaylorSeries([1, 0, mpq(2, 24), 0]))
    rep.equal("L_1", L[2], lookup("L1"))
    # dT/dz = (1/z)(-1/2 + Rhat^-1/2 + z^2 Rhat/8) T
    bracket = (R.inverse() * mpq(1, 2) - mpq(1, 2) + R.times_z(2) * mpq(1, 8)).truncate(N)
    rhs = (bracket.divide_by_z() * T).truncate(N - 1)
    rep.equal(f"dT/dz = (1/z)(-1/2 + Rhat^-1/2 + z^2 Rhat/8) T through z^{N - 1}", T.derivative(), rhs)
    rep.add("T(0) = 1", T[0] == 1)
    rep.add("all series are even", all(s.is_even() for s in (X, L, T, I1, I2)))
    return rep


def reference_constants():
    """Read-only table of the fixed constants (``I21``, ``L1``, ``T1``, ``P2_20_eps2``)."""
    return CONSTANTS
