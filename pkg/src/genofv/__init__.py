"""High-order finite-volume solver for the 1-D Euler equations with GENO,
WENO-JS, WENO-Z and TENO interface reconstruction."""

__version__ = "0.1.0"

from .euler import (
    AdmissibilityError,
    ConservedState,
    GasModel,
    PrimitiveState,
    cons_to_prim,
    prim_to_cons,
)
from .geno import GenoParams, TenoParams
from .schemes import SCHEMES, Reconstructor
from .solver import BoundaryCondition, CellField, Problem, SchemeConfig, advance_to_time
from .cases import CaseConfig, make_case
from .riemann import exact_riemann

__all__ = [
    "AdmissibilityError",
    "BoundaryCondition",
    "CaseConfig",
    "CellField",
    "ConservedState",
    "GasModel",
    "GenoParams",
    "PrimitiveState",
    "Problem",
    "Reconstructor",
    "SCHEMES",
    "SchemeConfig",
    "TenoParams",
    "advance_to_time",
    "cons_to_prim",
    "exact_riemann",
    "make_case",
    "prim_to_cons",
]
