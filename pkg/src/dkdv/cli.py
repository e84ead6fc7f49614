"""Command-line interface: ``dkdv {eval,flow,reconstruct,series,verify}``."""

from __future__ import annotations

import argparse
import json
import sys

from .diffpoly import RINGS, DiffPoly, FlowError, term_order_key
from .parse import ParseError, parse_expr
from .scalar import format_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SERIES_OPS = ("L", "R", "X", "T", "I1", "I2", "Xhat", "Lhat", "That")


def _coeff_text(c) -> str:
    return str(c) if not c.is_real() else format_rational(c.re)


def poly_json(p: DiffPoly) -> list:
    """``[{"eps_power": n, "terms": [{"monomial", "coeff"}]}]`` grouped by eps power."""
    blocks: dict = {}
    for (e, jets), c in p.sorted_terms():
        blocks.setdefault(e, []).append({"monomial": p.monomial_str(jets) or "1", "coeff": _coeff_text(c)})
    return [{"eps_power": e, "terms": t} for e, t in sorted(blocks.items())]


def _emit(out, obj):
    out.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def cmd_eval(args, out):
    ring = RINGS[args.ring]
    p = parse_expr(args.expr, ring, args.order)
    if args.json:
        _emit(out, {"ring": list(ring.names), "order": args.order, "blocks": poly_json(p)})
    else:
        out.write(p.to_str() + "\n")
    return EXIT_OK


def _flow(family, d, E):
    from .hierarchy import dkdv_flow, extended_flow

    return dkdv_flow(d, E) if family == "tau" else extended_flow(d, E)


def cmd_flow(args, out):
    from .hierarchy import to_chart

    F = to_chart(_flow(args.family, args.index, args.order), args.chart)
    names = F.ring.names
    label = f"{args.family}_{args.index}"
    if args.json:
        variables = {
            n: {"potential": poly_json(F.potential[i]), "rhs": poly_json(F.rhs[i])} for i, n in enumerate(names)
        }
        _emit(out, {"flow": label, "chart": args.chart, "order": args.order, "variables": variables})
        return EXIT_OK
    out.write(f"flow {label}, chart {args.chart}, through ep^{args.order}\n")
    for i, n in enumerate(names):
        out.write(f"potential {n}: {F.potential[i]}\n")
    for i, n in enumerate(names):
        out.write(f"rhs {n}: {F.rhs[i]}\n")
    return EXIT_OK


def cmd_reconstruct(args, out):
    from .hierarchy import extended_flow

    F = extended_flow(args.index, args.order)
    rec = F.meta["reconstruction"]
    out.write(f"extended flow t1_{args.index}, through ep^{args.order}\n")
    for p, n, rank, ker in rec.orders:
        out.write(f"ep^{p}: unknowns {n}, rank {rank}, kernel {ker}\n")
    out.write(f"P (u, w chart): {rec.P}\n")
    out.write(f"DK_1,{args.index} (u, v chart): {F.potential[1]}\n")
    return EXIT_OK


def cmd_series(args, out):
    from .genfun import named_series

    if args.order % 2:
        raise _Usage("--order must be even (it is 2G)")
    s = named_series(args.op, args.order // 2)
    coeffs = [format_rational(c) for c in s.even_coeffs()]
    if args.json:
        _emit(out, {"op": args.op, "order": args.order, "coeffs": coeffs})
    else:
        out.write("\n".join(coeffs) + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    from .verify import SUITES, run_suites

    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(names)
    failed = 0
    for name, rep, ms in results:
        head = rep.title + (f"  [{ms:.0f} ms]" if args.timings else "")
        out.write(head + "\n")
        for c in rep.checks:
            out.write("  " + c.line().replace("\n", "\n  ") + "\n")
            failed += not c.ok
    total = sum(len(r.checks) for _, r, _ in results)
    out.write(f"{total - failed}/{total} checks passed\n")
    return EXIT_OK if not failed else EXIT_FAIL


class _Usage(Exception):
    pass


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dkdv", description="Exact computations with the discrete KdV hierarchy.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="parse an expression and print it in canonical form")
    p.add_argument("expr")
    p.add_argument("--ring", choices=sorted(RINGS), default="uv")
    p.add_argument("--order", type=_nonneg, default=6, help="eps truncation order")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("flow", help="print a flow of the hierarchy")
    p.add_argument("--family", choices=("tau", "t1"), required=True)
    p.add_argument("--index", type=_nonneg, required=True)
    p.add_argument("--order", type=_nonneg, default=6)
    p.add_argument("--chart", choices=("uv", "w", "dr"), default="uv")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("reconstruct", help="solve for an extended flow and report the linear systems")
    p.add_argument("--index", type=_nonneg, required=True)
    p.add_argument("--order", type=_nonneg, default=6)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("series", help="coefficients of z^0, z^2, ... of a named even series")
    p.add_argument("--op", choices=SERIES_OPS, required=True)
    p.add_argument("--order", type=_nonneg, default=4, help="highest power of z (2G)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=("lax", "commute", "qcb", "dr", "nogo", "fmanifold", "genfun", "all"), default="all")
    p.add_argument("--timings", action="store_true", help="show elapsed time per suite")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (ParseError, _Usage) as exc:
        sys.stderr.write(f"dkdv {args.command}: {exc}\n")
        return EXIT_USAGE
    except FlowError as exc:
        sys.stderr.write(f"dkdv {args.command}: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
