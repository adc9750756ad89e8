"""Eigenvalue at one modulation value, routed direct or through the dilation."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..coefficients import ProblemSpec
from ..config import SolverSettings
from ..eigensolver import EigenSolution, solve_adaptive
from ..grid import build_discrete_problem
from ..rescale import RescaledSolution, solve_rescaled

DIRECT_RANGE = (0.1, 10.0)


@dataclass(frozen=True, eq=False)
class PointSolution:
    """Eigenpair of ``spec`` at ``parameter``.

    ``solution`` lives on the direct grid or on the rescaled one, as
    ``route`` says; :meth:`profile` maps it to original sizes either way.
    """

    parameter: float
    eigenvalue: float
    route: str
    solution: EigenSolution
    rescaled: Optional[RescaledSolution] = None

    def profile(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.rescaled is not None:
            return self.rescaled.original_profile()
        return self.solution.grid.x, self.solution.u_vec


def solve_at(spec: ProblemSpec, value: float, settings: SolverSettings,
             direct_range=DIRECT_RANGE) -> PointSolution:
    """Solve ``spec`` at modulation ``value``; direct inside ``direct_range``, rescaled outside."""
    spec_v = spec.with_value(value)
    lo, hi = direct_range
    if lo <= value <= hi:
        sol, _ = solve_adaptive(spec_v, lambda g: build_discrete_problem(spec_v, g, settings.strict),
                                settings.grid(), settings.iteration(), settings.eps_tail,
                                settings.max_doublings, settings.method)
        return PointSolution(float(value), sol.eigenvalue, "direct", sol)
    res = solve_rescaled(spec_v, settings.grid(), settings.iteration(), settings.eps_tail,
                         settings.max_doublings, settings.strict, settings.method)
    return PointSolution(float(value), res.eigenvalue, "rescaled", res.solution, res)


def with_mode(spec: ProblemSpec, mode: Optional[str]) -> ProblemSpec:
    return spec if mode is None or mode == spec.mode else replace(spec, mode=mode)
