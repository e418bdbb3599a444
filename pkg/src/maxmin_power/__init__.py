"""Closed-form max-min weighted SINR power control with independent oracles."""

from .bounds import UtilityBound, compute_bound, regime
from .io import (
    DocumentError,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_document,
    solution_to_dict,
)
from .oracles import ConvergenceWarning, OracleReport, bisection_solve, fixed_point_solve
from .perron import PerronResult, collatz_wielandt, spectral_radius
from .problem import (
    InvalidInstanceError,
    ProblemInstance,
    ScaledProblem,
    candidate_matrix,
    evaluate_utility,
    is_feasible,
    norm_star,
    scale,
    sinr_ratios,
    validate,
)
from .solver import NumericalError, Solution, UncertifiedWarning, solve, solve_closed_form

__version__ = "0.1.0"
