"""Sweeps, asymptotic checks, prion steady states and sonication optimum."""
from ._common import DIRECT_RANGE, PointSolution, solve_at
from .expansion import ExpansionReport, fit_critical_expansion
from .limits import LimitLawReport, check_limit_law
from .pmca import SonicationError, SonicationResult, golden_section_max, optimize_sonication
from .prion import SteadyState, SteadyStateReport, find_disease_steady_states
from .sweep import SweepCurve, SweepSample, log_parameters, sweep_eigenvalue, turning_points

__all__ = [
    "DIRECT_RANGE", "PointSolution", "solve_at", "ExpansionReport", "fit_critical_expansion",
    "LimitLawReport", "check_limit_law", "SonicationError", "SonicationResult",
    "golden_section_max", "optimize_sonication", "SteadyState", "SteadyStateReport",
    "find_disease_steady_states", "SweepCurve", "SweepSample", "log_parameters",
    "sweep_eigenvalue", "turning_points",
]
