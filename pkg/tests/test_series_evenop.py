"""Series and constant-coefficient operators, checked against sympy's Taylor expansions."""

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from dkdv.diffpoly import UV
from dkdv.evenop import EvenOp, NotNormalized, make_named, op_for_order
from dkdv.genfun import named_series
from dkdv.series import TaylorSeries, cos_series, exp_series, sin_series

z = sp.symbols("z")

ORACLE = {
    "L": (z / 2) / sp.sin(z / 2),
    "R": 2 * sp.tan(z / 2) / z,
    "X": 2 * sp.tan(z / 2) / z,
    "T": sp.sqrt(2 * sp.tan(z / 2) / z),
    "I1": 1 / sp.cos(z / 2),
    "I2": (z / 2) / sp.sin(z / 2) * sp.sqrt(2 * sp.tan(z / 2) / z),
}


def _sympy_even_coeffs(expr, G):
    s = sp.series(expr, z, 0, 2 * G + 1).removeO()
    return [mpq(str(sp.nsimplify(s.coeff(z, 2 * g)))) for g in range(G + 1)]


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_named_series_against_sympy(name):
    G = 5
    assert named_series(name, G).even_coeffs() == _sympy_even_coeffs(ORACLE[name], G)


def test_operator_fixtures():
    assert list(make_named("L", 2).coeffs) == [1, mpq(1, 24), mpq(7, 5760)]
    assert list(make_named("R", 2).coeffs) == [1, mpq(1, 12), mpq(1, 120)]
    assert list(make_named("T", 2).coeffs) == [1, mpq(1, 24), mpq(19, 5760)]
    assert make_named("R", 3)[3] == mpq(17, 20160)
    assert make_named("L", 3)[3] == mpq(31, 967680)
    assert make_named("T", 3)[3] == mpq(55, 193536)


def test_i2_second_coefficient():
    assert named_series("I2", 2).even_coeffs() == [1, mpq(1, 12), mpq(1, 160)]


def test_exp_sin_cos_consistent():
    N = 9
    e = exp_series(1, N)
    # exp(z) exp(-z) = 1 and cos^2 + sin^2 = 1
    assert e * exp_series(-1, N) == TaylorSeries.one(N)
    c, s = cos_series(mpq(1, 3), N), sin_series(mpq(1, 3), N)
    assert c * c + s * s == TaylorSeries.one(N)


def test_series_inverse_and_sqrt():
    s = TaylorSeries([1, 2, 3, 4, 5])
    assert s * s.inverse() == TaylorSeries.one(4)
    assert s.sqrt() * s.sqrt() == s
    with pytest.raises(ZeroDivisionError):
        TaylorSeries([0, 1]).inverse()
    with pytest.raises(ValueError):
        TaylorSeries([2, 1]).sqrt()
    with pytest.raises(ValueError):
        TaylorSeries([1, 1]).divide_by_z()


@given(st.lists(rationals, min_size=3, max_size=3))
def test_evenop_inverse_and_sqrt(tail):
    op = EvenOp([1] + tail)
    assert op @ op.invert() == EvenOp.identity(3)
    r = op.sqrt()
    assert r @ r == op


def test_not_normalized():
    with pytest.raises(NotNormalized):
        EvenOp([2, 1]).invert()
    with pytest.raises(NotNormalized):
        EvenOp([3]).sqrt()


def test_apply_l_to_u():
    # L u = u + eps^2/24 u_xx + 7 eps^4/5760 u_xxxx + ...
    E = 4
    u = UV.var("u", 0, E)
    Lu = op_for_order("L", E)(u)
    want = u + u.dx_power(2).times_eps(2).scale(mpq(1, 24)) + u.dx_power(4).times_eps(4).scale(mpq(7, 5760))
    assert Lu == want


def test_apply_needs_long_enough_operator():
    u = UV.var("u", 0, 6)
    with pytest.raises(ValueError, match="needs g >= 3"):
        make_named("R", 2)(u)


def test_x_equals_r_two_routes():
    assert make_named("X", 6) == make_named("R", 6)


def test_named_errors():
    with pytest.raises(KeyError):
        make_named("Q", 2)
    with pytest.raises(ValueError):
        make_named("L", -1)
