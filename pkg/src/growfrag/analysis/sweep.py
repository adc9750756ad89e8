"""Eigenvalue as a function of the modulation parameter."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..coefficients import ProblemSpec
from ..config import SolverSettings
from ..errors import CollapseError, ConfigurationError, NonConvergenceError, OracleError
from ._common import DIRECT_RANGE, solve_at, with_mode


@dataclass(frozen=True)
class SweepSample:
    """One sweep point; ``eigenvalue`` is NaN when the solve failed."""

    parameter: float
    eigenvalue: float
    route: str = ""
    iterations: int = 0
    residual: float = float("nan")
    R: float = float("nan")
    N: int = 0
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


@dataclass(frozen=True)
class SweepCurve:
    """Sampled map ``parameter -> eigenvalue`` with its turning points.

    ``maxima`` and ``minima`` hold interior ``(parameter, value)`` turning
    points of the successful samples. ``monotone`` is true when the first
    differences never change sign.
    """

    mode: str
    samples: Tuple[SweepSample, ...]
    maxima: Tuple[Tuple[float, float], ...] = ()
    minima: Tuple[Tuple[float, float], ...] = ()
    monotone: bool = True

    @property
    def parameters(self) -> np.ndarray:
        return np.array([s.parameter for s in self.samples])

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([s.eigenvalue for s in self.samples])

    @property
    def extrema(self) -> List[Tuple[str, float, float]]:
        out = [("max", p, v) for p, v in self.maxima] + [("min", p, v) for p, v in self.minima]
        return sorted(out, key=lambda e: e[1])

    @property
    def gaps(self) -> List[float]:
        return [s.parameter for s in self.samples if not s.ok]

    def argmax(self) -> Tuple[float, float]:
        """Best successful sample."""
        ok = [s for s in self.samples if s.ok]
        best = max(ok, key=lambda s: s.eigenvalue)
        return best.parameter, best.eigenvalue


def turning_points(params, values):
    """Interior maxima and minima from sign changes of the first differences.

    Flat steps are skipped so that a plateau counts once.
    """
    p = np.asarray(params, dtype=float)
    v = np.asarray(values, dtype=float)
    keep = np.isfinite(v)
    p, v = p[keep], v[keep]
    maxima, minima = [], []
    signs = np.sign(np.diff(v))
    idx = [i for i, s in enumerate(signs) if s != 0]
    for a, b in zip(idx, idx[1:]):
        if signs[a] > 0 > signs[b]:
            i = int(np.argmax(v[a + 1:b + 1])) + a + 1
            maxima.append((float(p[i]), float(v[i])))
        elif signs[a] < 0 < signs[b]:
            i = int(np.argmin(v[a + 1:b + 1])) + a + 1
            minima.append((float(p[i]), float(v[i])))
    return tuple(maxima), tuple(minima), not (maxima or minima)


def log_parameters(lo: float, hi: float, points: int) -> np.ndarray:
    """``points`` log-spaced values from ``lo`` to ``hi``."""
    if not (0 < lo < hi) or points < 2:
        raise ConfigurationError("need 0 < lo < hi and at least two points")
    return np.logspace(np.log10(lo), np.log10(hi), int(points))


def sweep_eigenvalue(spec: ProblemSpec, parameters: Sequence[float],
                     settings: Optional[SolverSettings] = None, mode: Optional[str] = None,
                     direct_range=DIRECT_RANGE) -> SweepCurve:
    """Eigenvalue at each parameter; direct solves inside ``direct_range``, rescaled outside.

    A failed solve leaves a NaN sample carrying the error message instead of
    aborting the sweep.
    """
    settings = settings or SolverSettings()
    spec = with_mode(spec, mode)
    params = np.asarray(parameters, dtype=float)
    if params.ndim != 1 or params.size == 0 or np.any(~(params > 0)) \
            or np.any(np.diff(params) <= 0):
        raise ConfigurationError("parameters must be positive and strictly increasing")
    samples = []
    for value in params:
        try:
            pt = solve_at(spec, float(value), settings, direct_range)
        except (NonConvergenceError, CollapseError, OracleError) as exc:
            samples.append(SweepSample(float(value), float("nan"), error=str(exc)))
            continue
        g = pt.solution.grid
        samples.append(SweepSample(float(value), pt.eigenvalue, pt.route, pt.solution.iterations,
                                   pt.solution.residual, g.R, g.N))
    maxima, minima, monotone = turning_points(params, [s.eigenvalue for s in samples])
    return SweepCurve(spec.mode, tuple(samples), maxima, minima, monotone)
