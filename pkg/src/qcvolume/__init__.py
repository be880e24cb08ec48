"""Exact extreme box volumes of d-quasi-copulas, with an exact LP cross-check."""

from .closed_form import (
    AuxiliaryInstance,
    AuxiliarySolution,
    ClosedFormSolution,
    UnsupportedDimensionError,
    VolumeSign,
    coeffs,
    compare_min_max,
    extreme_volume,
    solve_auxiliary,
    terminal_w,
)
from .exact import RationalParseError, binomial, parse_rational, render_rational
from .grid import Box, GridQuasiCopula, symmetric_grid, validate, volume
from .lp import LpModel, LpSolution, check_complementary_slackness, dualize, solve
from .models import (
    DUAL_REDUCED,
    FINAL_DUAL,
    FULL_LP,
    REDUCED_LP,
    SYMMETRIC_LP,
    build,
    build_auxiliary_lp,
    solve_small_min,
)

__all__ = [
    "AuxiliaryInstance",
    "AuxiliarySolution",
    "ClosedFormSolution",
    "UnsupportedDimensionError",
    "VolumeSign",
    "coeffs",
    "compare_min_max",
    "extreme_volume",
    "solve_auxiliary",
    "terminal_w",
    "RationalParseError",
    "binomial",
    "parse_rational",
    "render_rational",
    "Box",
    "GridQuasiCopula",
    "symmetric_grid",
    "validate",
    "volume",
    "LpModel",
    "LpSolution",
    "check_complementary_slackness",
    "dualize",
    "solve",
    "DUAL_REDUCED",
    "FINAL_DUAL",
    "FULL_LP",
    "REDUCED_LP",
    "SYMMETRIC_LP",
    "build",
    "build_auxiliary_lp",
    "solve_small_min",
]
