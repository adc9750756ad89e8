"""Self-similar change of variables for extreme modulation parameters.

For a polymerization multiplier ``alpha`` and ``k = 1 / (1 + gamma - nu)``,
the profile ``U(x) = alpha**-k v(alpha**-k x)`` solves the original problem
when ``v`` is the eigenvector of the problem with rates

    tau_alpha(x)  = alpha**(-k nu)    tau(alpha**k x)
    beta_alpha(x) = alpha**(-k gamma) beta(alpha**k x)

and eigenvalue ``theta = alpha**(-k gamma) lambda``. A fragmentation
multiplier ``a`` maps to ``alpha = 1 / a`` with ``Lambda = a lambda_{1/a}``.
Exponents are those of the rates at the limit the dilation approaches:
``0`` when ``alpha <= 1`` and ``inf`` otherwise. Homogeneous kernels are
unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .coefficients import (FRAGMENTATION, INF, MODES, POLYMERIZATION,
                           KernelModel, PowerLaw, ProblemSpec, as_limit)
from .eigensolver import (EigenSolution, IterationConfig, solve_adaptive)
from .errors import DomainError, IllPosedRegimeError, PlanError
from .grid import DiscreteProblem, Grid, _checked, assemble

REGIME_SPLIT = 1.0


def dilation_exponent(nu: float, gamma: float) -> float:
    """``k = 1 / (1 + gamma - nu)``.

    Raises
    ------
    IllPosedRegimeError
        If ``1 + gamma - nu <= 0``.
    """
    denom = 1.0 + gamma - nu
    if not denom > 0:
        raise IllPosedRegimeError(f"1 + gamma - nu = {denom:g} must be positive")
    return 1.0 / denom


@dataclass(frozen=True)
class DilationPlan:
    """Exponents at the limit ``L`` and the resulting dilation exponent ``k``."""

    L: float
    nu: float
    gamma: float
    k: float
    mode: str = POLYMERIZATION

    def __post_init__(self):
        object.__setattr__(self, "L", as_limit(self.L))
        if self.mode not in MODES:
            raise PlanError(f"unknown mode {self.mode!r}")
        if not math.isclose(self.k, dilation_exponent(self.nu, self.gamma), rel_tol=1e-12):
            raise PlanError("k does not match the exponents")

    @property
    def l(self) -> float:  # noqa: E743 - the fragmentation exponent
        """Dilation exponent in the fragmentation parameter, ``-k``."""
        return -self.k

    def polymerization_parameter(self, value: float) -> float:
        """The ``alpha`` that ``value`` stands for in this plan's mode."""
        return value if self.mode == POLYMERIZATION else 1.0 / value


def regime(mode: str, value: float) -> float:
    """Limit approached by the dilation for this modulation value."""
    alpha = value if mode == POLYMERIZATION else 1.0 / value
    return 0.0 if alpha <= REGIME_SPLIT else INF


def make_plan(spec: ProblemSpec, value: Optional[float] = None) -> DilationPlan:
    """Plan for ``spec`` at ``value`` (default ``spec.value``)."""
    value = spec.value if value is None else float(value)
    if not value > 0:
        raise DomainError("modulation value must be positive")
    L = regime(spec.mode, value)
    nu, gamma = spec.tau.exponent(L), spec.beta.exponent(L)
    return DilationPlan(L, nu, gamma, dilation_exponent(nu, gamma), spec.mode)


def _check_plan(spec: ProblemSpec, plan: DilationPlan):
    if plan.mode != spec.mode:
        raise PlanError(f"plan is for {plan.mode}, problem is {spec.mode}")
    if plan.L != regime(spec.mode, spec.value):
        raise PlanError(f"value {spec.value:g} does not belong to the regime L={plan.L}")
    if plan.nu != spec.tau.exponent(plan.L) or plan.gamma != spec.beta.exponent(plan.L):
        raise PlanError("plan exponents differ from the declared ones")


@dataclass(frozen=True)
class RescaledRates:
    """Dilated rates of ``spec`` at its modulation value."""

    spec: ProblemSpec
    plan: DilationPlan

    @property
    def alpha(self) -> float:
        return self.plan.polymerization_parameter(self.spec.value)

    @property
    def scale(self) -> float:
        """Size factor ``alpha**k``: original sizes are ``scale`` times rescaled ones."""
        return self.alpha ** self.plan.k

    def effective_tau(self, x):
        k, a = self.plan.k, self.alpha
        return a ** (-k * self.plan.nu) * self.spec.tau(a ** k * np.asarray(x, dtype=float))

    def effective_beta(self, x):
        k, a = self.plan.k, self.alpha
        return a ** (-k * self.plan.gamma) * self.spec.beta(a ** k * np.asarray(x, dtype=float))


def build_rescaled_problem(spec: ProblemSpec, plan: DilationPlan, grid: Grid,
                           strict: bool = False) -> DiscreteProblem:
    """Discretize the dilated problem whose eigenvalue is ``theta``.

    Raises
    ------
    PlanError
        If ``plan`` does not fit the mode, regime or exponents of ``spec``.
    RejectedSpecError
        If ``spec`` fails the assumption checks.
    """
    _check_plan(spec, plan)
    _checked(spec, strict)
    rates = RescaledRates(spec, plan)
    return assemble(rates.effective_tau(grid.x), rates.effective_beta(grid.x),
                    spec.kernel, grid, rates)


def recover_eigenvalue(theta: float, value: float, plan: DilationPlan) -> float:
    """Original eigenvalue from ``theta``.

    ``alpha**(gamma k) theta`` for a polymerization multiplier and
    ``a**((1 - nu) k) theta`` for a fragmentation multiplier ``a``.
    """
    if plan.mode == POLYMERIZATION:
        return value ** (plan.gamma * plan.k) * theta
    return value ** ((1.0 - plan.nu) * plan.k) * theta


def limit_profile_problem(plan: DilationPlan, prefactors: Tuple[float, float],
                          kernel: KernelModel, grid: Grid, strict: bool = False) -> DiscreteProblem:
    """Discretize the pure-power problem ``tau_bar x**nu``, ``beta_bar x**gamma``.

    Its eigenpair is the limit of the rescaled eigenpairs as the
    modulation approaches the plan's limit.
    """
    dilation_exponent(plan.nu, plan.gamma)
    tau_bar, beta_bar = prefactors
    spec = ProblemSpec(PowerLaw(tau_bar, plan.nu), PowerLaw(beta_bar, plan.gamma), kernel)
    _checked(spec, strict)
    return assemble(spec.effective_tau(grid.x), spec.effective_beta(grid.x), kernel, grid, spec)


def limit_plan_and_prefactors(spec: ProblemSpec, L) -> Tuple[DilationPlan, Tuple[float, float]]:
    """Plan and ``(tau_bar, beta_bar)`` of ``spec`` at the limit ``L``."""
    L = as_limit(L)
    nu, gamma = spec.tau.exponent(L), spec.beta.exponent(L)
    plan = DilationPlan(L, nu, gamma, dilation_exponent(nu, gamma), spec.mode)
    return plan, (spec.tau.prefactor(L), spec.beta.prefactor(L))


@dataclass(frozen=True, eq=False)
class RescaledSolution:
    """Rescaled eigenpair ``(theta, v)`` with the plan and the original parameter."""

    theta: float
    solution: EigenSolution
    plan: DilationPlan
    value: float

    @property
    def v_vec(self) -> np.ndarray:
        return self.solution.u_vec

    @property
    def eigenvalue(self) -> float:
        """Eigenvalue of the original problem."""
        return recover_eigenvalue(self.theta, self.value, self.plan)

    def original_profile(self) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes and eigenvector in original sizes, ``x = s y`` and ``U = v / s``."""
        s = self.plan.polymerization_parameter(self.value) ** self.plan.k
        return s * self.solution.grid.x, self.solution.u_vec / s


def solve_rescaled(spec: ProblemSpec, grid: Grid, config: Optional[IterationConfig] = None,
                   eps_tail: float = 1e-6, max_doublings: int = 4, strict: bool = False,
                   method: str = "time_stepping") -> RescaledSolution:
    """Solve ``spec`` at its modulation value through the dilated problem."""
    plan = make_plan(spec)
    rates = RescaledRates(spec, plan)
    sol, _ = solve_adaptive(rates, lambda g: build_rescaled_problem(spec, plan, g, strict),
                            grid, config, eps_tail, max_doublings, method)
    return RescaledSolution(sol.eigenvalue, sol, plan, spec.value)
