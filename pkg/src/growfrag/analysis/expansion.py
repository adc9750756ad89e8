"""First correction to the eigenvalue near a nonzero limit.

Polymerization with ``beta = b0 + b1 x**g1 + ...`` at 0 gives
``lambda_alpha - b0 ~ b1 alpha**(k g1) int x**g1 v``, where ``v`` is the
limit profile and ``k`` the dilation exponent at 0. Fragmentation with
``tau = t0 x + t1 x**n1 + ...`` gives
``Lambda_a - t0 ~ t1 a**(-k (n1 - 1)) int x**n1 v / int x v`` as ``a``
grows.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..coefficients import POLYMERIZATION, PowerLaw, ProblemSpec
from ..config import SolverSettings
from ..eigensolver import solve_adaptive
from ..errors import DomainError
from ..rescale import limit_plan_and_prefactors, limit_profile_problem
from ._common import solve_at, with_mode


@dataclass(frozen=True)
class ExpansionReport:
    mode: str
    parameters: Tuple[float, ...]
    excess: Tuple[float, ...]
    k: float
    fitted_exponent: float
    predicted_exponent: float
    fitted_prefactor: float
    predicted_prefactor: float

    @property
    def exponent_error(self) -> float:
        return abs(self.fitted_exponent - self.predicted_exponent) / abs(self.predicted_exponent)

    @property
    def prefactor_error(self) -> float:
        return abs(self.fitted_prefactor - self.predicted_prefactor) / abs(self.predicted_prefactor)

    def lines(self):
        yield f"mode = {self.mode}"
        yield f"k = {self.k:.15g}"
        for p, e in zip(self.parameters, self.excess):
            yield f"sample {p:.15g} {e:.15g}"
        yield f"fitted_exponent = {self.fitted_exponent:.15g}"
        yield f"predicted_exponent = {self.predicted_exponent:.15g}"
        yield f"fitted_prefactor = {self.fitted_prefactor:.15g}"
        yield f"predicted_prefactor = {self.predicted_prefactor:.15g}"


def _excess(spec, point, base):
    """Eigenvalue minus ``base`` without cancellation where possible."""
    if spec.mode == POLYMERIZATION:
        # lambda - b0 = dx sum (beta_i - b0) u_i, since dx sum u_i = 1
        x, u = point.profile()
        dx = x[1] - x[0]
        return float(dx * np.dot(spec.beta(x) - base, u))
    return point.eigenvalue - base


def fit_critical_expansion(spec: ProblemSpec, base: float, coefficient: float, exponent: float,
                           parameters: Optional[Sequence[float]] = None, mode: Optional[str] = None,
                           settings: Optional[SolverSettings] = None) -> ExpansionReport:
    """Fit ``log(eigenvalue - base)`` against ``log(parameter)`` and compare with the expansion.

    Parameters
    ----------
    base, coefficient, exponent : float
        ``b0, b1, g1`` of ``beta`` at 0 for polymerization, ``t0, t1, n1``
        of ``tau`` at 0 for fragmentation.
    parameters : sequence of float
        Defaults to ``10**-2 .. 10**-5`` for polymerization and ``10**2 .. 10**5``
        for fragmentation.

    Raises
    ------
    DomainError
        If ``coefficient == 0``, ``exponent <= 0`` or ``base <= 0``, or for
        fragmentation if ``exponent <= 1``.
    """
    settings = settings or SolverSettings()
    spec = with_mode(spec, mode)
    if coefficient == 0 or not exponent > 0 or not base > 0:
        raise DomainError("expansion needs coefficient != 0, exponent > 0 and base > 0")
    poly = spec.mode == POLYMERIZATION
    if not poly and not exponent > 1:
        raise DomainError("fragmentation expansion needs an exponent above 1")
    if parameters is None:
        parameters = 10.0 ** (-np.arange(2, 6.0)) if poly else 10.0 ** np.arange(2, 6.0)
    params = np.asarray(parameters, dtype=float)

    points = [solve_at(spec, float(p), settings) for p in params]
    excess = np.array([_excess(spec, pt, base) for pt in points])
    if np.any(~(excess * np.sign(coefficient) > 0)):
        raise DomainError("eigenvalue does not approach the base from the coefficient's side")
    slope, intercept = np.polyfit(np.log(params), np.log(np.abs(excess)), 1)

    plan, prefactors = limit_plan_and_prefactors(spec, 0.0)
    k = plan.k
    predicted_exponent = k * exponent if poly else -k * (exponent - 1.0)

    # limit profile with the truncation adapted like any other solve
    grid = settings.grid()
    lim_spec = ProblemSpec(PowerLaw(prefactors[0], plan.nu), PowerLaw(prefactors[1], plan.gamma),
                           spec.kernel)
    sol, _ = solve_adaptive(lim_spec, lambda g: limit_profile_problem(plan, prefactors, spec.kernel, g),
                            grid, settings.iteration(), settings.eps_tail, settings.max_doublings,
                            settings.method)
    x, v, dx = sol.grid.x, sol.u_vec, sol.grid.dx
    if poly:
        predicted_prefactor = coefficient * dx * np.dot(x ** exponent, v)
    else:
        predicted_prefactor = coefficient * np.dot(x ** exponent, v) / np.dot(x, v)
    return ExpansionReport(spec.mode, tuple(map(float, params)), tuple(map(float, excess)), k,
                           float(slope), float(predicted_exponent),
                           float(np.sign(coefficient) * np.exp(intercept)), float(predicted_prefactor))

