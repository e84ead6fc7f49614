import pytest
from gmpy2 import mpq

from dkdv.diffpoly import DR, UV, UW, W12, Flow, FlowError, commutator_flows
from dkdv.evenop import EvenOp, op_for_order
from dkdv.hierarchy import (
    ReconstructionError,
    build_QCB,
    dk11_display,
    dkdv_flow,
    extended_flow,
    miura_transport,
    nogo_check,
    nogo_flows,
    reconstruct_extended_flow,
    seed_constant,
    shift_quotient_identity,
    q_binomial_identity,
    to_chart,
    topological_flows,
    uw_flows,
)

E = 6
u = UV.var("u", 0, E)
v = UV.var("v", 0, E)


def vanishes(pair):
    return all(not p for p in pair)


def test_tau0_display():
    F = dkdv_flow(0, E)
    R = op_for_order("R", E)
    assert not F["u"]
    assert F["v"] == R(v * v - u.scale(4)).dx().scale(mpq(-1, 4))
    assert str(F.potential[1]).startswith("-1/4*v^2 + u - 1/24*ep^2*v*v_2")


def test_dispersionless_dk21():
    pot = dkdv_flow(1, E).potential[1]
    assert pot.at_eps0().set_zero("u") == (v ** 4).scale(mpq(1, 32)).truncate(0)


@pytest.mark.parametrize("d", range(4))
def test_potential_shape(d):
    pot = dkdv_flow(d, E).potential[1]
    assert pot.is_homogeneous("odeg", 2 * d + 2)
    assert pot.is_real() and pot.is_even() and pot.in_A0()


def test_flow_order_is_requested_order():
    for order in (2, 3, 5):
        assert dkdv_flow(1, order).E == order


def test_qcb_leading_terms():
    qcb = build_QCB(E)
    w = UW.var("w", 0, E)
    U = UW.var("u", 0, E)
    assert qcb.Q.at_eps0() == (w * w).scale(mpq(-1, 4)).at_eps0()
    assert qcb.Q.coeff_eps(2) == (w * w.dx_power(2)).scale(mpq(-1, 24)).at_eps0()
    assert qcb.C.at_eps0() == (w ** 3).scale(mpq(-1, 6)).at_eps0()
    assert qcb.B.at_eps0() == (U * w).at_eps0()


def test_btilde_antisymmetric():
    Bt = build_QCB(E).Btilde
    swapped = Bt.compose({"u": UW.var("w", 0, E), "w": UW.var("u", 0, E)}, UW)
    assert Bt == -swapped


def test_auxiliary_identities():
    lhs, rhs = shift_quotient_identity(8)
    assert lhs == rhs and lhs
    lhs, rhs = q_binomial_identity(8)
    assert lhs == rhs and lhs


def test_topological_pair():
    t20, t11 = topological_flows(E)
    assert t11["u"] == u * u.dx()
    assert t20["v"] == dkdv_flow(0, E)["v"]
    assert vanishes(commutator_flows(t20, t11))
    assert vanishes(commutator_flows(*uw_flows(E)))
    dk = dk11_display(E)
    assert dk.at_eps0().set_zero("u") == (v ** 3).scale(mpq(-1, 6)).at_eps0()


def test_reconstruction_d1_matches_display():
    rec = reconstruct_extended_flow(build_QCB(E).Q, 1, mpq(-1, 6), E)
    assert rec.unique and len(rec.orders) == E + 1
    F = extended_flow(1, E)
    assert F.potential[1] == dk11_display(E)


def test_reconstruction_d0_base_case():
    rec = reconstruct_extended_flow(build_QCB(E).Q, 0, 1, E)
    assert rec.P == UW.var("w", 0, E)
    F = extended_flow(0, E)
    assert F.potential[1] == v and F["u"] == u.dx()


def test_reconstruction_d2_commutes():
    F = extended_flow(2, E)
    assert F.meta["reconstruction"].unique
    assert seed_constant(2) == mpq(1, 60)
    assert F.potential[1].at_eps0().set_zero("u") == (v ** 5).scale(mpq(1, 60)).at_eps0()
    for d in range(3):
        assert vanishes(commutator_flows(F, dkdv_flow(d, E)))


def test_reconstruction_reports_offending_order():
    # a Q that does not come from the hierarchy: the system has no solution
    w = UW.var("w", 0, E)
    bad_Q = (w * w).scale(mpq(-1, 4)) + (w * w.dx_power(2)).times_eps(2)
    with pytest.raises(ReconstructionError) as info:
        reconstruct_extended_flow(bad_Q, 1, mpq(-1, 6), E)
    assert info.value.order >= 2
    with pytest.raises(ValueError):
        reconstruct_extended_flow(dkdv_flow(0, E).potential[1], 1, mpq(-1, 6), E)


def test_miura_round_trips():
    F = dkdv_flow(1, E)
    assert miura_transport(F, {"u": (None, "u"), "v": (None, "v")}, UV).rhs == F.rhs
    G = to_chart(F, "w")
    back = miura_transport(G, {"w1": ("L", "u"), "w2": ("L", "v")}, UV)
    assert back.rhs == F.rhs and back.potential == F.potential
    L = op_for_order("L", E)
    there = miura_transport(F, {"u": (L, "u"), "v": (L, "v")}, UV)
    again = miura_transport(there, {"u": (L.invert(), "u"), "v": (L.invert(), "v")}, UV)
    assert again.rhs == F.rhs


def test_miura_dr_linear_part_is_T():
    P = to_chart(dkdv_flow(0, E), "dr").potential[1]
    u1 = DR.var("u1", 0, E)
    assert P - P.set_zero("u1") == op_for_order("T", E)(u1)


def test_miura_errors():
    F = dkdv_flow(0, E)
    with pytest.raises(FlowError):
        miura_transport(F, {"u": (None, "w1")}, W12)
    with pytest.raises(FlowError, match="not invertible"):
        miura_transport(F, {"u": (EvenOp([2, 1, 0, 0, 0]), "u"), "v": (None, "v")}, UV)
    with pytest.raises(ValueError):
        to_chart(F, "xy")


def test_nogo():
    res = nogo_check(E)
    assert res.affine
    assert res.never_commute
    assert not vanishes(res.c0)
    assert not vanishes(commutator_flows(*nogo_flows(mpq(1, 24), E)))
    assert "1/24" in res.witness


def test_flow_needs_right_number_of_components():
    with pytest.raises(FlowError):
        Flow(("x", 0), UV, (u,))
