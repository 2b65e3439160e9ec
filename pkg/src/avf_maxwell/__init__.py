"""Sixth-order energy-conserving AVF solver for 3D periodic Maxwell equations."""

from .errors import ConfigurationError, ConsistencyError, DimensionError, UnsupportedOrderError
from .grid import EMState, GridSpec, build_grid, cube_grid, inner_product_h, norm_h, norm_inf, sample
from .stepper import SolverPlan, build_plan, run, step, step_dense

__all__ = [
    "ConfigurationError",
    "ConsistencyError",
    "DimensionError",
    "UnsupportedOrderError",
    "EMState",
    "GridSpec",
    "build_grid",
    "cube_grid",
    "inner_product_h",
    "norm_h",
    "norm_inf",
    "sample",
    "SolverPlan",
    "build_plan",
    "run",
    "step",
    "step_dense",
]

__version__ = "0.1.0"
