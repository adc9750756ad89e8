"""Principal eigenpair of the discretized growth-fragmentation operator.

The discrete operator ``A`` acts on node values as

    (A u)_i = (tau_{i-1} u_{i-1} - tau_i u_i) / dx - beta_i u_i
              + 2 dx sum_{j >= i} K[i, j] beta_j u_j

with ``tau_0 u_0 = 0``. :func:`solve_principal` finds its positive
eigenvector by iterating a positive time step and renormalizing;
:func:`dense_oracle_eigenpair` solves the same matrix problem directly for
cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from . import kernels
from ._kernels_py import gain as _gain
from .errors import (CollapseError, ConfigurationError, NonConvergenceError,
                     OracleError)
from .grid import DiscreteProblem, Grid, adapt_truncation

IMPLICIT_UPWIND = "implicit_upwind"
SEMI_IMPLICIT = "semi_implicit"
SCHEMES = (IMPLICIT_UPWIND, SEMI_IMPLICIT)
DENSE_LIMIT = 2000


@dataclass(frozen=True)
class IterationConfig:
    """Settings of the normalized time-stepping iteration.

    Parameters
    ----------
    dt : float or None
        Time step. ``None`` picks ``1 / max(beta)`` for the implicit upwind
        scheme and ``0.5 dx / max(tau)`` for the semi-implicit one.
    epsilon : float
        Stop when ``(dx / dt) * sum |u^n - u^{n-1}| < epsilon``; must be
        below ``dx``.
    max_iters : int
    initial : {"gaussian", "uniform"}
        Starting profile; the gaussian bump sits at ``center`` (default
        ``R / 4``) with ``width`` (default ``R / 10``).
    scheme : {"implicit_upwind", "semi_implicit"}
        ``semi_implicit`` takes the upwind inflow from the previous iterate;
        ``implicit_upwind`` solves for it, which removes the transport
        time-scale from the step size.
    shifted : bool
        Include the current eigenvalue estimate ``dx sum beta u - tau_N u_N``
        in the step so that fixed points are exact eigenvectors of ``A``
        whatever ``dt`` is.
    """

    dt: Optional[float] = None
    epsilon: float = 1e-8
    max_iters: int = 500_000
    initial: str = "gaussian"
    center: Optional[float] = None
    width: Optional[float] = None
    scheme: str = IMPLICIT_UPWIND
    shifted: bool = True

    def __post_init__(self):
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError("dt must be positive")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ConfigurationError("epsilon must be positive")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ConfigurationError("max_iters must be a positive integer")
        if self.initial not in ("gaussian", "uniform"):
            raise ConfigurationError(f"unknown initial profile {self.initial!r}")
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")
        if self.width is not None and not self.width > 0:
            raise ConfigurationError("width must be positive")

    def time_step(self, problem: DiscreteProblem) -> float:
        if self.dt is not None:
            return float(self.dt)
        tmax, bmax = float(problem.tau_vec.max()), float(problem.beta_vec.max())
        if self.scheme == IMPLICIT_UPWIND and bmax > 0:
            return 1.0 / bmax
        if tmax > 0:
            return 0.5 * problem.dx / tmax
        return 0.1 / bmax if bmax > 0 else 1.0

    def initial_profile(self, grid: Grid) -> np.ndarray:
        if self.initial == "uniform":
            return np.full(grid.N, 1.0 / grid.R)
        center = grid.R / 4 if self.center is None else self.center
        width = grid.R / 10 if self.width is None else self.width
        u = np.exp(-(((grid.x - center) / width) ** 2))
        return normalize(u, grid.dx)


@dataclass(frozen=True, eq=False)
class EigenSolution:
    """Positive eigenvector ``u_vec`` with ``dx * sum(u_vec) = 1``.

    ``eigenvalue`` is ``dx * sum(beta_i u_i)``; ``residual`` is
    ``dx * sum |A u - eigenvalue * u|``.
    """

    eigenvalue: float
    u_vec: np.ndarray
    iterations: int
    final_increment: float
    residual: float
    grid: Grid
    method: str = "time_stepping"
    dt: Optional[float] = None

    @property
    def lambda_(self) -> float:
        return self.eigenvalue

    @property
    def x(self) -> np.ndarray:
        return self.grid.x


def normalize(u, dx: float) -> np.ndarray:
    """``u / (dx * sum u)``.

    Raises
    ------
    CollapseError
        If ``dx * sum u`` is not positive.
    """
    u = np.asarray(u, dtype=float)
    mass = dx * u.sum()
    if not mass > 0:
        raise CollapseError(f"total mass {mass!r} is not positive")
    return u / mass


def step_semi_implicit(problem: DiscreteProblem, u_tilde, dt: float, shift: float = 0.0):
    """One step with implicit losses and explicit inflow and gain, before normalization.

    ``u_i = (u~_i + dt (tau_{i-1} u~_{i-1} / dx + gain_i)) / (1 + dt (tau_i / dx + beta_i))``.
    A positive ``shift`` is added to the loss, a negative one to the source.
    """
    return kernels.semi_implicit_step(problem.tau_vec, problem.beta_vec, problem.kernel_col,
                                      None if problem.column_constant else problem.kernel_mat,
                                      problem.dx, float(dt), np.asarray(u_tilde, dtype=float),
                                      float(shift), False)


def apply_operator(problem: DiscreteProblem, u) -> np.ndarray:
    """``A u`` without forming ``A``."""
    u = np.asarray(u, dtype=float)
    flux = problem.tau_vec * u
    out = -flux / problem.dx - problem.beta_vec * u
    out[1:] += flux[:-1] / problem.dx
    kmat = None if problem.column_constant else problem.kernel_mat
    return out + _gain(problem.beta_vec, problem.kernel_col, kmat, problem.dx, u)


def discrete_operator(problem: DiscreteProblem) -> np.ndarray:
    """Dense ``A``."""
    dx = problem.dx
    t, b = problem.tau_vec, problem.beta_vec
    a = 2.0 * dx * problem.kernel_mat * b[None, :]
    a[np.diag_indices_from(a)] -= t / dx + b
    idx = np.arange(1, problem.grid.N)
    a[idx, idx - 1] += t[:-1] / dx
    return a


def residual_norm(problem: DiscreteProblem, solution: EigenSolution) -> float:
    """``dx * sum |A u - lambda u|`` for a solution on the problem's grid."""
    if solution.grid != problem.grid:
        raise ConfigurationError("solution and problem live on different grids")
    return _residual(problem, solution.u_vec, solution.eigenvalue)


def _residual(problem, u, lam):
    return float(problem.dx * np.abs(apply_operator(problem, u) - lam * u).sum())


def _finish(problem, u, iterations, increment, method, dt=None):
    u = np.where(u > 0, u, 0.0)
    u = normalize(u, problem.dx)
    u.setflags(write=False)
    lam = float(problem.dx * np.dot(problem.beta_vec, u))
    return EigenSolution(lam, u, iterations, float(increment), _residual(problem, u, lam),
                         problem.grid, method, dt)


def solve_principal(problem: DiscreteProblem, config: Optional[IterationConfig] = None) -> EigenSolution:
    """Principal eigenpair by normalized time stepping.

    Raises
    ------
    ConfigurationError
        If ``epsilon`` is not below ``dx``.
    NonConvergenceError
        If the stop test fails after ``max_iters`` steps; carries the last
        increment.
    CollapseError
        If an iterate loses all its mass.
    """
    config = config or IterationConfig()
    if not config.epsilon < problem.dx:
        raise ConfigurationError(f"epsilon={config.epsilon:g} must be below dx={problem.dx:g}")
    dt = config.time_step(problem)
    u0 = config.initial_profile(problem.grid)
    kmat = None if problem.column_constant else problem.kernel_mat
    u, it, inc = kernels.iterate(problem.tau_vec, problem.beta_vec, problem.kernel_col, kmat,
                                 problem.dx, dt, u0, config.epsilon, int(config.max_iters),
                                 config.scheme == IMPLICIT_UPWIND, config.shifted)
    if it < 0:
        raise CollapseError("iteration lost all mass")
    if not inc < config.epsilon:
        raise NonConvergenceError(
            f"no convergence after {it} iterations (increment {inc:.3g}, dt {dt:.3g})",
            increment=float(inc), iterations=int(it))
    return _finish(problem, u, int(it), inc, "time_stepping", dt)


def _upper_bound(problem, u):
    # max_i (A u)_i / u_i bounds the dominant eigenvalue of a Metzler matrix for u > 0
    if not (np.all(np.isfinite(u)) and np.all(u > 0)):
        return None
    return float(np.max(apply_operator(problem, u) / u))


def dense_oracle_eigenpair(problem: DiscreteProblem, tol: float = 1e-12,
                           max_iters: int = 20_000) -> EigenSolution:
    """Dominant eigenpair of the dense ``A`` by shifted inverse iteration.

    The first shift ``max(beta) + 1`` lies above the whole spectrum since
    each column of ``A`` sums to at most ``beta_j``. Later shifts tighten
    to the bound ``max_i (A u)_i / u_i`` of the current positive iterate,
    which stays above the dominant eigenvalue, so the iteration keeps
    targeting it.

    Raises
    ------
    ConfigurationError
        If ``N > 2000``.
    OracleError
        If the dominant eigenvector changes sign.
    """
    n = problem.grid.N
    if n > DENSE_LIMIT:
        raise ConfigurationError(f"dense oracle limited to N <= {DENSE_LIMIT}, got {n}")
    a = discrete_operator(problem)
    eye = np.eye(n)
    sigma = float(problem.beta_vec.max()) + 1.0
    scale = max(1.0, abs(sigma))
    lu = sla.lu_factor(sigma * eye - a)
    u = np.full(n, 1.0 / problem.grid.R)
    est = np.inf
    done = False
    for it in range(1, max_iters + 1):
        v = sla.lu_solve(lu, u)
        v = v / (problem.dx * v.sum())
        change = problem.dx * np.abs(v - u).sum()
        u = v
        lam_a = float(problem.dx * apply_operator(problem, u).sum())
        if change < tol and abs(lam_a - est) < tol * scale:
            done = True
            break
        est = lam_a
        bound = _upper_bound(problem, u)
        # refactor once the bound is markedly closer than the current shift
        if bound is not None and sigma - bound > 0.5 * (sigma - lam_a) + tol * scale:
            sigma = bound + 1e-9 * scale
            lu = sla.lu_factor(sigma * eye - a)
    if not done:
        raise OracleError(f"inverse iteration did not settle in {max_iters} steps")
    if u.min() < -1e-10 * u.max():
        raise OracleError("dominant eigenvector changes sign")
    return _finish(problem, u, it, change, "dense_oracle")


def save_eigenpair(path, solution: EigenSolution, header: Tuple[str, ...] = (),
                  x=None, u=None) -> None:
    """Columnar text: ``#`` header lines, then ``x u`` rows at full precision.

    ``x`` and ``u`` replace the solution's own nodes and values, e.g. with a
    rescaled eigenvector mapped back to original sizes.
    """
    g = solution.grid
    x = g.x if x is None else x
    u = solution.u_vec if u is None else u
    dx = float(x[1] - x[0])
    lines = list(f"# {h}" for h in header)
    lines += [f"# lambda = {solution.eigenvalue!r}", f"# R = {float(x[-1])!r}", f"# N = {len(x)}",
              f"# dx = {dx!r}", f"# iterations = {solution.iterations}",
              f"# residual = {solution.residual!r}", f"# method = {solution.method}", "x u"]
    lines += [f"{a:.17g} {b:.17g}" for a, b in zip(x, u)]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_eigenpair(path) -> EigenSolution:
    """Inverse of :func:`save_eigenpair`; unrecognized header lines are skipped."""
    meta = {}
    rows = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                key, sep, val = line[1:].partition("=")
                if sep:
                    meta[key.strip()] = val.strip()
            elif line and line != "x u":
                rows.append([float(t) for t in line.split()])
    data = np.array(rows)
    grid = Grid(float(meta["dx"]), int(meta["N"]))
    u = data[:, 1]
    u.setflags(write=False)
    return EigenSolution(float(meta["lambda"]), u, int(meta.get("iterations", 0)), math.nan,
                         float(meta.get("residual", "nan")), grid, meta.get("method", "loaded"))


def solve_adaptive(spec_like, build: Callable[[Grid], DiscreteProblem], grid: Grid,
                   config: Optional[IterationConfig] = None, eps_tail: float = 1e-6,
                   max_doublings: int = 4, method: str = "time_stepping"):
    """Solve, doubling ``R`` at fixed ``dx`` until the tail is below ``eps_tail``.

    ``build`` maps a grid to the discrete problem. Returns ``(solution,
    problem)`` for the last grid tried; the tail test is not enforced past
    ``max_doublings``.
    """
    for _ in range(max_doublings + 1):
        problem = build(grid)
        if method == "dense_oracle":
            sol = dense_oracle_eigenpair(problem)
        else:
            sol = solve_principal(problem, config)
        bigger = adapt_truncation(spec_like, grid, sol, eps_tail)
        if bigger == grid:
            break
        grid = bigger
    return sol, problem
