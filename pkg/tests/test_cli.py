import io
import json
import subprocess
import sys

import pytest
from gmpy2 import mpq
from hypothesis import given

from conftest import diffpolys
from dkdv.cli import main
from dkdv.diffpoly import DR, UV, W12
from dkdv.parse import ParseError, parse_expr
from dkdv.scalar import I


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_parse_examples():
    u, v = UV.var("u"), UV.var("v")
    assert parse_expr("v^2 - 4*u", UV) == v * v - u.scale(4)
    assert parse_expr("ep^2 * v_2", UV) == v.dx_power(2).times_eps(2)
    assert parse_expr("1/2*I*ep*u_1", UV) == u.dx().times_eps(1).scale(I * mpq(1, 2))
    assert parse_expr("w1_3 - w2", W12) == W12.var("w1", 3) - W12.var("w2")
    assert parse_expr("-(u1 + u2)^2", DR) == -(DR.var("u1") + DR.var("u2")) ** 2


def test_parse_truncates_at_order():
    p = parse_expr("v + ep^3*v_3", UV, E=2)
    assert p == UV.var("v", 0, 2)


@pytest.mark.parametrize(
    "text, line, col",
    [("v +", 1, 4), ("v * (u", 1, 7), ("v\n + x", 2, 4), ("u ^ v", 1, 5), ("u / v", 1, 3), ("u $ v", 1, 3), ("", 1, 1)],
)
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_expr(text, UV)
    assert (info.value.line, info.value.column) == (line, col)


def test_unknown_variable_message():
    with pytest.raises(ParseError, match="unknown variable 'w'"):
        parse_expr("w", UV)


@given(diffpolys(E=6))
def test_print_parse_round_trip(p):
    assert parse_expr(p.to_str(), UV, p.E) == p


def test_eval_command():
    code, out = run("eval", "v^2 - 4*u + ep^2*v_2")
    assert code == 0 and out == "v^2 - 4*u + ep^2*v_2\n"
    code, out = run("eval", "u1*u2", "--ring", "dr", "--json")
    data = json.loads(out)
    assert data["blocks"] == [{"eps_power": 0, "terms": [{"monomial": "u1*u2", "coeff": "1"}]}]


def test_eval_usage_errors(capsys):
    code, _ = run("eval", "v +")
    assert code == 2
    assert "line 1, column 4" in capsys.readouterr().err
    code, _ = run("eval", "v", "--ring", "xyz")
    assert code == 2


def test_flow_command():
    code, out = run("flow", "--family", "tau", "--index", "0", "--order", "4", "--chart", "uv")
    assert code == 0
    assert "potential v: -1/4*v^2 + u - 1/24*ep^2*v*v_2" in out
    code, out = run("flow", "--family", "t1", "--index", "1", "--order", "2", "--chart", "dr")
    assert "potential u1: 1/2*u1^2" in out
    code, out = run("flow", "--family", "tau", "--index", "0", "--order", "2", "--json")
    data = json.loads(out)
    first = data["variables"]["v"]["potential"][0]
    assert first["eps_power"] == 0
    assert first["terms"][0] == {"monomial": "v^2", "coeff": "-1/4"}


def test_series_command():
    code, out = run("series", "--op", "L")
    assert code == 0 and out.split() == ["1", "1/24", "7/5760"]
    code, out = run("series", "--op", "I1", "--order", "4", "--json")
    assert json.loads(out)["coeffs"] == ["1", "1/8", "5/384"]
    code, _ = run("series", "--op", "L", "--order", "3")
    assert code == 2


def test_reconstruct_command():
    code, out = run("reconstruct", "--index", "1", "--order", "4")
    assert code == 0
    assert "ep^4: unknowns 9, rank 9, kernel 0" in out


def test_verify_single_suite():
    code, out = run("verify", "--suite", "nogo")
    assert code == 0 and "FAIL" not in out
    assert out.strip().endswith("checks passed")


def test_verify_failure_exit_code(monkeypatch):
    from dkdv import verify
    from dkdv.report import Report

    def broken():
        rep = Report("broken")
        rep.equal("one is two", 1, 2)
        return rep

    monkeypatch.setitem(verify.SUITES, "nogo", broken)
    code, out = run("verify", "--suite", "nogo")
    assert code == 1
    assert "FAIL  one is two" in out and "lhs: 1" in out


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "dkdv", "flow", "--family", "tau", "--index", "1", "--order", "4", "--chart", "w"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
