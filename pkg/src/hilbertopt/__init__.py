"""Certified convex optimization over coordinate Hilbert spaces."""

from .dirichlet import build_problem, cg_oracle, compare, energy, solve_energy
from .functions import (
    CoshSum,
    Linear,
    NormSquared,
    Quadratic,
    coercivity_probe,
    directional_derivative,
    epigraph_check,
    evaluate,
    gradient,
    jensen_check,
    strictness_check,
)
from .minimize import SolveOptions, certify, multistart_uniqueness, solve_projected, solve_unconstrained
from .sets import Ball, Box, Halfspace, Hyperplane, Simplex, WholeSpace, contains, project, segment_check, vi_certificate
from .space import DiagonalWeighted, LaplacianEnergy, Standard, inner, norm, weak_probe

__version__ = "0.1.0"
