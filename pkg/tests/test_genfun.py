import pytest
from gmpy2 import mpq

from dkdv.genfun import (
    FM,
    IntegrabilityError,
    VectorPotential,
    density_closed_form,
    density_report,
    flow_density_report,
    named_series,
    oriented_associativity_check,
    potential_extended_2spin,
    principal_density,
    reference_constants,
    series_relations_check,
)

v1 = FM.var("v1", 0, 0)
v2 = FM.var("v2", 0, 0)


def test_potential():
    P = potential_extended_2spin()
    assert P.c(2, 2, 2) == v2.scale(mpq(-1, 2))
    for a in (1, 2):
        for b in (1, 2):
            assert P.c(a, 1, b) == FM.const(int(a == b), 0)
    assert not P.F[0].partial0("v2")


def test_oriented_associativity():
    assert oriented_associativity_check(potential_extended_2spin()).ok


def test_unit_axiom_failure_reported():
    degenerate = VectorPotential((v1, v2))
    rep = oriented_associativity_check(degenerate)
    assert not rep.ok
    assert any("unit" in c.name for c in rep.failures())


def test_constant_structure_constants_reduce_to_matrix_commutativity():
    # c^2_22 = 1 everywhere: the algebra is commutative, so associativity holds
    P = VectorPotential(((v1 * v1).scale(mpq(1, 2)), v1 * v2 + (v2 * v2).scale(mpq(1, 2))))
    assert oriented_associativity_check(P).ok
    # break the unit with a v1^2 term in F^2: c^2_11 = 2 fails the unit axiom
    Q = VectorPotential((P.F[0], P.F[1] + v1 * v1))
    assert not oriented_associativity_check(Q).ok


def test_density_examples():
    P = potential_extended_2spin()
    assert principal_density(P, 2, 2, 0).poly == v1 - (v2 * v2).scale(mpq(1, 4))
    for d in range(4):
        assert principal_density(P, 1, 1, d).poly == density_closed_form(1, 1, d)
    for beta, d in ((1, 1), (2, 1), (1, 2)):
        got = principal_density(P, 2, beta, d).poly.set_zero("v1")
        assert got == density_closed_form(2, beta, d)
    assert principal_density(P, 2, 1, 1).poly.set_zero("v1") == (v2 ** 3).scale(mpq(-1, 6))


def test_densities_vanish_at_origin():
    P = potential_extended_2spin()
    for d in range(1, 4):
        for a in (1, 2):
            for b in (1, 2):
                assert principal_density(P, a, b, d).poly.coefficient([]) == 0


def test_non_associative_potential_fails_integrability():
    # with a unit, any two-dimensional potential is associative; drop the unit
    P = VectorPotential(((v1 * v1).scale(mpq(1, 2)), v1 * v2 + v1 * v1 * v2))
    assert not oriented_associativity_check(P).ok
    with pytest.raises(IntegrabilityError, match="mixed partials"):
        principal_density(P, 2, 1, 1)


def test_reports():
    assert density_report().ok
    assert flow_density_report().ok
    assert series_relations_check(5).ok


def test_series_values():
    assert named_series("I1", 2).even_coeffs() == [1, mpq(1, 8), mpq(5, 384)]
    assert named_series("I2", 2).even_coeffs()[1] == mpq(1, 12)
    with pytest.raises(KeyError):
        named_series("Z", 2)


def test_reference_constants():
    c = reference_constants()
    assert c["I21"] == mpq(1, 12) and c["L1"] == mpq(1, 24) and c["T1"] == mpq(1, 24)
    with pytest.raises(TypeError):
        c["T1"] = 0
