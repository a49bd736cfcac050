"""Exact computations for perverse sheaves attached to nodal degenerations."""

from .qlinalg import RatMatrix, parse_matrix, rank, kernel_basis, unipotency_index
from .milnor import parse_poly, milnor_number, vanishing_profile
from .scenario import load_scenario, run_verification

__version__ = "0.1.0"

__all__ = [
    "RatMatrix",
    "parse_matrix",
    "rank",
    "kernel_basis",
    "unipotency_index",
    "parse_poly",
    "milnor_number",
    "vanishing_profile",
    "load_scenario",
    "run_verification",
]
