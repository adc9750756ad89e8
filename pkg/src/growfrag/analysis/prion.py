"""Disease steady states of the prion model.

With monomer quantity ``V`` acting as the polymerization multiplier, an
endemic steady state is a root ``V`` of ``lambda_V = mu0`` in
``(0, xi / delta)``. Its polymer mass follows from the monomer balance
``xi = V (delta + rho int tau U)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..coefficients import POLYMERIZATION, ProblemSpec
from ..config import SolverSettings
from ..errors import ConfigurationError, DomainError
from ._common import PointSolution, solve_at, with_mode

ROOT_RTOL = 1e-4
STABLE = "stable"
UNSTABLE = "unstable"


@dataclass(frozen=True, eq=False)
class SteadyState:
    """Root ``V`` with its polymer mass ``rho`` and size profile ``(x, U)``."""

    V: float
    eigenvalue: float
    rho: float
    x: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class SteadyStateReport:
    mu0: float
    xi: float
    delta: float
    roots: Tuple[SteadyState, ...]
    disease_free_stability: Optional[str]
    marginal: bool
    eigenvalue_at_vbar: float
    grid_V: Tuple[float, ...] = ()
    grid_eigenvalues: Tuple[float, ...] = ()

    @property
    def V_bar(self) -> float:
        return self.xi / self.delta


def polymer_mass(point: PointSolution, spec: ProblemSpec, xi: float, delta: float) -> float:
    """``(xi / V - delta) / int tau U`` from the monomer equation at rest."""
    x, u = point.profile()
    dx = x[1] - x[0]
    moment = float(dx * np.dot(spec.tau(x), u))
    return (xi / point.parameter - delta) / moment


def _bisect(f, lo, flo, hi, fhi, mu0, rtol):
    """Bisection in ``log V`` until both the bracket and ``|f|`` are within tolerance."""
    best = None
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        fm, pt = f(mid)
        best = (mid, fm, pt)
        if fm == 0 or (hi / lo - 1 <= rtol and abs(fm) <= rtol * mu0):
            return best
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return best


def find_disease_steady_states(spec: ProblemSpec, mu0: float, xi: float, delta: float,
                               V_grid: Optional[Sequence[float]] = None,
                               settings: Optional[SolverSettings] = None,
                               points: int = 49, v_min: Optional[float] = None,
                               rtol: float = ROOT_RTOL) -> SteadyStateReport:
    """Roots of ``V -> lambda_V - mu0`` below ``V_bar = xi / delta`` and disease-free stability.

    ``V_grid`` defaults to ``points`` log-spaced values from ``v_min``
    (default ``1e-6 V_bar``) up to ``V_bar`` excluded. Every strict sign
    change on the grid is refined by bisection; a map within ``rtol`` of
    ``mu0`` everywhere yields no roots. The disease-free state is
    stable when ``lambda_{V_bar} < mu0``, unstable when it is larger, and
    marginal without a label when they agree within ``rtol``.
    """
    if not (mu0 > 0 and xi > 0 and delta > 0):
        raise DomainError("mu0, xi and delta must be positive")
    settings = settings or SolverSettings()
    spec = with_mode(spec, POLYMERIZATION)
    v_bar = xi / delta
    if V_grid is None:
        lo = 1e-6 * v_bar if v_min is None else v_min
        V_grid = np.logspace(np.log10(lo), np.log10(v_bar), points + 1)[:-1]
    grid_v = np.asarray(V_grid, dtype=float)
    if np.any(grid_v <= 0) or np.any(grid_v >= v_bar) or np.any(np.diff(grid_v) <= 0):
        raise ConfigurationError("V grid must increase strictly inside (0, V_bar)")

    cache = {}

    def f(v):
        if v not in cache:
            pt = solve_at(spec, v, settings)
            cache[v] = (pt.eigenvalue - mu0, pt)
        return cache[v]

    vals = [f(float(v))[0] for v in grid_v]
    roots = []
    # a curve flat at mu0 has a continuum of equilibria and no isolated root
    flat = max(abs(v) for v in vals) <= rtol * mu0
    for i in range(len(grid_v) - 1 if not flat else 0):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            continue
        if b == 0:
            v, pt = float(grid_v[i + 1]), f(float(grid_v[i + 1]))[1]
        elif (a > 0) != (b > 0):
            v, _, pt = _bisect(f, float(grid_v[i]), a, float(grid_v[i + 1]), b, mu0, rtol)
        else:
            continue
        x, u = pt.profile()
        roots.append(SteadyState(v, pt.eigenvalue, polymer_mass(pt, spec, xi, delta), x, u))

    lam_bar = solve_at(spec, v_bar, settings).eigenvalue
    marginal = abs(lam_bar - mu0) <= rtol * mu0
    label = None if marginal else (STABLE if lam_bar < mu0 else UNSTABLE)
    return SteadyStateReport(mu0, xi, delta, tuple(roots), label, marginal, lam_bar,
                             tuple(map(float, grid_v)), tuple(v + mu0 for v in vals))
