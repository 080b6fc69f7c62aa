"""Exact computations for CR GJMS operators, Q-curvature and the linearized
obstruction operator on the Heisenberg group."""

from .exact import GaussianRational
from .frame import FrameTensor, christoffel_from_koszul, curvature, einstein_check, lichnerowicz_apply
from .heisenberg import HeisPoly, TensorPoly, parse_expression
from .lichnerowicz import check_complex_property, extract_obstruction, indicial_polynomial, solve_lichnerowicz
from .opalgebra import NcNormal, OpPoly, gjms_product, nc_apply, nc_normalize, obstruction_closed_form, qpoly
from .scalar import Profile, ScalarLaplacian, extract_gjms, q_curvature, q_transform, solve_eigen, solve_log, total_q_check, volume_coeffs
from .series import RhoSeries

__all__ = [
    "FrameTensor",
    "GaussianRational",
    "HeisPoly",
    "NcNormal",
    "OpPoly",
    "Profile",
    "RhoSeries",
    "ScalarLaplacian",
    "TensorPoly",
    "check_complex_property",
    "christoffel_from_koszul",
    "curvature",
    "einstein_check",
    "extract_gjms",
    "extract_obstruction",
    "gjms_product",
    "indicial_polynomial",
    "lichnerowicz_apply",
    "nc_apply",
    "nc_normalize",
    "obstruction_closed_form",
    "parse_expression",
    "q_curvature",
    "q_transform",
    "qpoly",
    "solve_eigen",
    "solve_lichnerowicz",
    "solve_log",
    "total_q_check",
    "volume_coeffs",
]
