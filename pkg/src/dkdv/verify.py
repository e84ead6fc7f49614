"""Verification suites.

Each suite returns a :class:`~dkdv.report.Report`.  ``run_suites`` runs a
list of them in a fixed order and records the elapsed time per suite.
"""

from __future__ import annotations

import time
from math import factorial

from gmpy2 import mpq

from .diffpoly import UV, commutator_flows
from .evenop import make_named, op_for_order
from .genfun import (
    density_report,
    flow_density_report,
    oriented_associativity_check,
    potential_extended_2spin,
    series_relations_check,
)
from .hierarchy import (
    double_factorial,
    dk11_display,
    dkdv_flow,
    dr_checks,
    extended_flow,
    miura_transport,
    nogo_check,
    nogo_flows,
    qcb_report,
    to_chart,
    topological_flows,
    uw_flows,
)
from .report import Report
from .shiftring import dispersionless_symbol, lax_operator, lax_power_plus, shift_mul, shift_sqrt

E_DEFAULT = 6


def _zero(flow_pair):
    return all(not p for p in flow_pair)


def lax_suite(E: int = E_DEFAULT, dmax: int = 3) -> Report:
    rep = Report(f"lax: flows from the Lax operator, d <= {dmax}, to eps^{E}")
    R = op_for_order("R", E)
    u, v = UV.var("u", 0, E), UV.var("v", 0, E)
    F0 = dkdv_flow(0, E)
    rep.equal("tau_0: du/dt = 0", F0["u"], UV.zero(E))
    rep.equal("tau_0: dv/dt = -1/4 dx R(v^2 - 4u)", F0["v"], R(v * v - u.scale(4)).dx().scale(mpq(-1, 4)))
    for d in range(dmax + 1):
        F = dkdv_flow(d, E)
        pot = F.potential[1]
        lim = pot.at_eps0().set_zero("u")
        want = (v ** (2 * d + 2)).scale(mpq(1, (-4) ** (d + 1) * factorial(d + 1))).truncate(0)
        rep.equal(f"DK_(2,{d}) at eps = 0, u = 0 is v^{2 * d + 2}/((-4)^{d + 1} {d + 1}!)", lim, want)
        rep.add(
            f"DK_(2,{d}) is real, even in eps, in A^[0], of odeg {2 * d + 2}",
            pot.is_real() and pot.is_even() and pot.in_A0() and pot.is_homogeneous("odeg", 2 * d + 2),
        )
        rep.equal(f"tau_{d}: dv/dt = dx DK_(2,{d})", F["v"], pot.dx())
    L = lax_operator(E)
    B = shift_sqrt(L, 4)
    BB = shift_mul(B, B)
    rep.add("sqrt(L)^2 = L on the exact window", all(BB[m] == L[m] for m in range(BB.low, 3)), detail=f"Lambda^{BB.low}..Lambda^2")
    rep.equal("b_0 = v/2", B[0], v.scale(mpq(1, 2)))
    for d in range(dmax + 1):
        sym = dispersionless_symbol(lax_power_plus(L, d))[0].set_zero("u")
        c = mpq((-1) ** d * double_factorial(2 * d - 1), 2 ** (3 * d + 1) * factorial(d))
        rep.equal(f"Coef_z^0 (z^2 + v z)^({d}+1/2) = {c} v^{2 * d + 1}", sym, (v ** (2 * d + 1)).truncate(0).scale(c))
    for d in range(min(dmax, 2) + 1):
        rep.equal(f"root depth {2 * d + 2} gives the same L^({d}+1/2)_+", lax_power_plus(L, d, 2 * d + 2), lax_power_plus(L, d))
    return rep


def commute_suite(E: int = E_DEFAULT, dmax: int = 3, ext_max: int = 2) -> Report:
    rep = Report(f"commute: pairwise commutators and the extended flows, to eps^{E}")
    for d1 in range(dmax + 1):
        for d2 in range(d1 + 1, dmax + 1):
            rep.add(f"[tau_{d1}, tau_{d2}] = 0", _zero(commutator_flows(dkdv_flow(d1, E), dkdv_flow(d2, E))))
    rep.add("[t2_0, t1_1] = 0 in the (u, w) chart", _zero(commutator_flows(*uw_flows(E))))
    rep.add("[t2_0, t1_1] = 0 in the (u, v) chart", _zero(commutator_flows(*topological_flows(E))))
    for d in range(1, ext_max + 1):
        F = extended_flow(d, E)
        rec = F.meta["reconstruction"]
        rep.add(
            f"t1_{d}: unique solution at every eps order",
            rec.unique and len(rec.orders) == E + 1,
            detail="kernel dims " + ",".join(str(k) for *_, k in rec.orders),
        )
        pot = F.potential[1]
        rep.add(f"DK_(1,{d}) is real, even in eps, in A^[0], of odeg {2 * d + 1}",
                pot.is_real() and pot.is_even() and pot.in_A0() and pot.is_homogeneous("odeg", 2 * d + 1))
        for dd in range(2):
            rep.add(f"[t1_{d}, tau_{dd}] = 0", _zero(commutator_flows(F, dkdv_flow(dd, E))))
    rep.equal("t1_1 from the solver equals the closed DK_(1,1)", extended_flow(1, E).potential[1], dk11_display(E))
    for d1 in range(ext_max + 1):
        for d2 in range(d1 + 1, ext_max + 1):
            rep.add(f"[t1_{d1}, t1_{d2}] = 0", _zero(commutator_flows(extended_flow(d1, E), extended_flow(d2, E))))
    return rep


def qcb_suite(E: int = 8) -> Report:
    return qcb_report(E)


def dr_suite(E: int = E_DEFAULT) -> Report:
    rep = dr_checks(E)
    F = dkdv_flow(1, E)
    back = {"w1": ("L", "u"), "w2": ("L", "v")}
    rt = miura_transport(to_chart(F, "w"), back, UV)
    rep.add("tau_1 to the (w1, w2) chart and back", rt.rhs == F.rhs and rt.potential == F.potential)
    rt = miura_transport(to_chart(F, "dr"), {"u1": (None, "u"), "u2": ("Tinv", "v")}, UV)
    rep.add("tau_1 to the DR chart and back", rt.rhs == F.rhs)
    ident = miura_transport(F, {"u": (None, "u"), "v": (None, "v")}, UV)
    rep.add("identity change of variables", ident.rhs == F.rhs)
    G = to_chart(F, "w")
    rep.add("commutators survive the change to (w1, w2)",
            _zero(commutator_flows(G, to_chart(extended_flow(1, E), "w"))))
    return rep


def nogo_suite(E: int = E_DEFAULT) -> Report:
    rep = Report(f"nogo: the DR-type pair with an alpha eps^2 u2_xx term, to eps^{E}")
    res = nogo_check(E)
    rep.add("commutator is affine in alpha", res.affine)
    rep.add("alpha = 0: commutator nonzero", not _zero(res.c0))
    rep.add("alpha = 1/24: commutator nonzero", not _zero(commutator_flows(*nogo_flows(mpq(1, 24), E))))
    rep.add("no rational alpha makes the commutator vanish", res.never_commute, detail=res.witness)
    return rep


def fmanifold_suite(E: int = E_DEFAULT) -> Report:
    rep = Report("fmanifold: genus-zero structure and principal densities")
    rep.extend(oriented_associativity_check(potential_extended_2spin()))
    rep.extend(density_report(dmax=3))
    rep.extend(flow_density_report(E))
    return rep


def genfun_suite(G: int = 5) -> Report:
    rep = Report("genfun: operator fixtures and series relations")
    want = {
        "L": [1, mpq(1, 24), mpq(7, 5760)],
        "R": [1, mpq(1, 12), mpq(1, 120)],
        "X": [1, mpq(1, 12), mpq(1, 120)],
        "T": [1, mpq(1, 24), mpq(19, 5760)],
    }
    for name, coeffs in want.items():
        rep.equal(f"{name} = [{', '.join(str(c) for c in coeffs)}, ...]", list(make_named(name, 2).coeffs), coeffs)
    rep.equal("X = R through g = 4 (exponential and trigonometric forms)", make_named("X", 4), make_named("R", 4))
    for name in ("L", "R", "T"):
        op = make_named(name, 4)
        rep.equal(f"{name} composed with its inverse is 1 (G = 4)", op @ op.invert(), make_named("L", 4).identity(4))
    T, R = make_named("T", 4), make_named("R", 4)
    rep.equal("T^2 = R (G = 4)", T @ T, R)
    rep.equal("sqrt(R)^-1 = sqrt(R^-1) (G = 4)", T.invert(), R.invert().sqrt())
    rep.extend(series_relations_check(G))
    return rep


SUITES = {
    "lax": lax_suite,
    "commute": commute_suite,
    "qcb": qcb_suite,
    "dr": dr_suite,
    "nogo": nogo_suite,
    "fmanifold": fmanifold_suite,
    "genfun": genfun_suite,
}


def run_suites(names) -> list:
    """Run suites in the given order; returns ``[(name, Report, elapsed_ms)]``."""
    out = []
    for name in names:
        t0 = time.perf_counter()
        try:
            rep = SUITES[name]()
        except Exception as exc:  # a crash counts as a failed check
            rep = Report(name)
            rep.add(f"{name} raised {type(exc).__name__}", False, detail=str(exc))
        out.append((name, rep, (time.perf_counter() - t0) * 1000))
    return out
