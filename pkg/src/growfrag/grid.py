"""Truncated uniform grid and the discretized coefficients.

Nodes are ``x_i = i * dx`` for ``i = 1..N`` so that ``x_N = R``; the node
``x_0 = 0`` is a ghost carrying no inflow.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .coefficients import (KernelModel, ProblemSpec, ValidationReport,
                           validate_assumptions)
from .errors import ConfigurationError, DomainError, RejectedSpecError

MIN_CELLS = 16
TAIL_FRACTION = 0.05


@dataclass(frozen=True)
class Grid:
    """Uniform grid on ``(0, R]`` with ``N`` cells; ``R`` is stored as ``dx * N``."""

    dx: float
    N: int

    @property
    def R(self) -> float:
        return self.dx * self.N

    @cached_property
    def x(self) -> np.ndarray:
        x = self.dx * np.arange(1, self.N + 1, dtype=float)
        x.setflags(write=False)
        return x

    def doubled(self) -> "Grid":
        """Twice the radius at the same spacing."""
        return Grid(self.dx, 2 * self.N)


def build_grid(R: float, N: int) -> Grid:
    """Uniform grid of ``N >= 16`` cells on ``(0, R]``."""
    if isinstance(N, bool) or int(N) != N:
        raise ConfigurationError(f"N must be an integer, got {N!r}")
    N = int(N)
    if not (np.isfinite(R) and R > 0):
        raise ConfigurationError(f"R must be positive, got {R!r}")
    if N < MIN_CELLS:
        raise ConfigurationError(f"N must be at least {MIN_CELLS}, got {N}")
    return Grid(float(R) / N, N)


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscreteProblem:
    """Node values of the rates and the fragmentation matrix on a grid.

    The kernel acts through ``K[i, j]``, zero for ``i > j``, with every
    column of unit mass ``dx * sum_i K[i, j] = 1``. When the column entries
    do not depend on ``i`` (the uniform kernel) only ``kernel_col[j]`` is
    stored and the gain reduces to a reverse cumulative sum.
    """

    grid: Grid
    tau_vec: np.ndarray
    beta_vec: np.ndarray
    kernel_col: Optional[np.ndarray] = None
    dense_kernel: Optional[np.ndarray] = field(default=None, repr=False)
    spec: object = None

    def __post_init__(self):
        n = self.grid.N
        for name in ("tau_vec", "beta_vec"):
            v = _frozen(getattr(self, name))
            if v.shape != (n,):
                raise ConfigurationError(f"{name} must have {n} entries")
            if not np.all(np.isfinite(v)) or np.any(v < 0):
                raise DomainError(f"{name} must be finite and nonnegative")
            object.__setattr__(self, name, v)
        if (self.kernel_col is None) == (self.dense_kernel is None):
            raise ConfigurationError("give exactly one of kernel_col and dense_kernel")
        if self.kernel_col is not None:
            object.__setattr__(self, "kernel_col", _frozen(self.kernel_col))
        else:
            object.__setattr__(self, "dense_kernel", _frozen(self.dense_kernel))

    @property
    def column_constant(self) -> bool:
        return self.kernel_col is not None

    @cached_property
    def kernel_mat(self) -> np.ndarray:
        """Dense ``K`` with zeros below the diagonal."""
        if self.dense_kernel is not None:
            return self.dense_kernel
        return _frozen(np.triu(np.broadcast_to(self.kernel_col, (self.grid.N, self.grid.N))))

    @property
    def dx(self) -> float:
        return self.grid.dx

    @property
    def x(self) -> np.ndarray:
        return self.grid.x


def kernel_columns(kernel: KernelModel, grid: Grid):
    """Fragmentation matrix for ``kernel`` on ``grid``.

    Returns ``(kernel_col, None)`` for a column-constant kernel and
    ``(None, K)`` otherwise. Entries are point samples
    ``kappa_tilde(x_i / x_j) / x_j`` rescaled to unit column mass. If some
    column has no finite positive mass that way (a profile vanishing or
    blowing up at ``s = 1``), every entry is replaced by the profile mass
    of the cell ``((i-1) dx, i dx]``.
    """
    if not kernel.has_density:
        raise DomainError("point-mass kernels cannot be discretized")
    dx, n, x = grid.dx, grid.N, grid.x
    if kernel.kind == "uniform":
        col = 1.0 / x
        col = col / (dx * np.arange(1, n + 1) * col)
        return col, None

    i = np.arange(1, n + 1, dtype=float)[:, None]
    j = np.arange(1, n + 1, dtype=float)[None, :]
    upper = i <= j
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = np.where(upper, kernel.density(np.minimum(i / j, 1.0)) / x[None, :], 0.0)
    mass = dx * raw.sum(axis=0)
    if not (np.all(np.isfinite(raw)) and np.all(mass > 0)):
        # cell masses of the profile, exact in total before renormalization
        cdf = kernel.cdf(np.minimum(i / j, 1.0)) - kernel.cdf(np.minimum((i - 1) / j, 1.0))
        raw = np.where(upper, cdf / dx, 0.0)
        mass = dx * raw.sum(axis=0)
    return None, raw / mass[None, :]


def _checked(spec: ProblemSpec, strict: bool) -> ValidationReport:
    report = validate_assumptions(spec)
    blocking = report.blocking(strict)
    if blocking:
        names = ", ".join(c.name for c in blocking)
        raise RejectedSpecError(f"problem fails assumption checks: {names}", report)
    return report


def build_discrete_problem(spec: ProblemSpec, grid: Grid, strict: bool = False) -> DiscreteProblem:
    """Sample ``spec`` on ``grid`` with the modulation applied.

    Parameters
    ----------
    strict : bool
        Also reject problems failing the existence checks, not only the
        structural ones.

    Raises
    ------
    RejectedSpecError
        When :func:`validate_assumptions` reports a blocking failure.
    """
    _checked(spec, strict)
    return assemble(spec.effective_tau(grid.x), spec.effective_beta(grid.x),
                    spec.kernel, grid, spec)


def assemble(tau_vec, beta_vec, kernel: KernelModel, grid: Grid, spec=None) -> DiscreteProblem:
    """DiscreteProblem from already sampled rate vectors."""
    col, mat = kernel_columns(kernel, grid)
    return DiscreteProblem(grid, tau_vec, beta_vec, col, mat, spec)


def tail_level(problem_like, grid: Grid, u) -> float:
    """Largest ``tau_i u_i`` or ``beta_i u_i`` over the last 5% of nodes."""
    u = np.asarray(u, dtype=float)
    start = grid.N - max(1, int(np.ceil(TAIL_FRACTION * grid.N)))
    xt = grid.x[start:]
    t = np.asarray(problem_like.effective_tau(xt)) * u[start:]
    b = np.asarray(problem_like.effective_beta(xt)) * u[start:]
    return float(max(np.max(t), np.max(b)))


def adapt_truncation(spec, initial: Grid, solution, eps_tail: float) -> Grid:
    """Double ``R`` at fixed ``dx`` when the solution is not small near ``R``.

    ``spec`` is anything with ``effective_tau`` and ``effective_beta``
    callables: a :class:`ProblemSpec` or a rescaled problem description.
    """
    if solution.grid != initial:
        raise ConfigurationError("solution was not computed on the given grid")
    if tail_level(spec, initial, solution.u_vec) > eps_tail:
        return initial.doubled()
    return initial
