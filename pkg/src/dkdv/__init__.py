"""Exact symbolic computations with the discrete KdV hierarchy and its extension."""

from .diffpoly import DR, UV, UW, W12, DiffPoly, Flow, Ring, commutator_flows, flow_derive
from .evenop import EvenOp, make_named
from .hierarchy import (
    build_QCB,
    dkdv_flow,
    dr_checks,
    extended_flow,
    miura_transport,
    nogo_check,
    reconstruct_extended_flow,
    to_chart,
    topological_flows,
)
from .parse import parse_expr
from .scalar import GaussianRational, I
from .shiftring import ShiftOp, lax_operator, lax_power_plus, shift_mul, shift_sqrt

__version__ = "0.1.0"

__all__ = [
    "DR", "UV", "UW", "W12", "DiffPoly", "Flow", "Ring", "commutator_flows", "flow_derive",
    "EvenOp", "make_named",
    "build_QCB", "dkdv_flow", "dr_checks", "extended_flow", "miura_transport", "nogo_check",
    "reconstruct_extended_flow", "to_chart", "topological_flows",
    "parse_expr", "GaussianRational", "I",
    "ShiftOp", "lax_operator", "lax_power_plus", "shift_mul", "shift_sqrt",
]
