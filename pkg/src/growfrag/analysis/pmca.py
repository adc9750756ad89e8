"""Constant sonication strength that maximizes the amplification rate."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ..coefficients import FRAGMENTATION, ProblemSpec
from ..config import SolverSettings
from ..errors import DomainError, GrowFragError, NonConvergenceError
from ._common import solve_at, with_mode
from .sweep import turning_points

SCAN_POINTS = 33
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class SonicationError(GrowFragError):
    """An eigen-solve failed during the optimization."""

    def __init__(self, message, afrag):
        super().__init__(message)
        self.afrag = afrag


@dataclass(frozen=True)
class SonicationResult:
    afrag_opt: float
    Lambda_opt: float
    interior: bool
    degenerate: bool
    multimodal: bool
    evaluations: int
    scan: Tuple[Tuple[float, float], ...] = ()

    @property
    def at_boundary(self) -> bool:
        return not self.interior


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float) -> Tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]`` until the bracket is shorter than ``tol``."""
    a, b = lo, hi
    c, d = b - INV_PHI * (b - a), a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimize_sonication(spec: ProblemSpec, afrag_max: float, tolerance: float = 1e-3,
                        settings: Optional[SolverSettings] = None) -> SonicationResult:
    """Maximize ``a -> Lambda_a`` over ``[1, afrag_max]``.

    A 33-point log scan comes first. With at most one interior maximum,
    golden-section search runs in ``log a`` over the whole interval;
    otherwise it runs on the bracket around the best scan point. The
    returned point is the best of the search and the scan, so it dominates
    every scan sample. ``tolerance`` is relative to ``a``.

    Raises
    ------
    SonicationError
        If an eigen-solve fails; carries the failing ``afrag``.
    """
    if not afrag_max > 1:
        raise DomainError("afrag_max must exceed 1")
    settings = settings or SolverSettings()
    spec = with_mode(spec, FRAGMENTATION)
    cache = {}

    def lam(a):
        if a not in cache:
            try:
                cache[a] = solve_at(spec, a, settings).eigenvalue
            except NonConvergenceError as exc:
                raise SonicationError(f"eigen-solve failed at afrag={a!r}: {exc}", a) from exc
        return cache[a]

    if math.log(afrag_max) <= tolerance:
        value = lam(afrag_max)
        return SonicationResult(afrag_max, value, False, True, False, len(cache))

    grid = np.exp(np.linspace(0.0, math.log(afrag_max), SCAN_POINTS))
    grid[0], grid[-1] = 1.0, afrag_max
    scan = [(float(a), lam(float(a))) for a in grid]
    maxima, _, _ = turning_points(grid, [v for _, v in scan])
    multimodal = len(maxima) > 1
    if multimodal:
        i = int(np.argmax([v for _, v in scan]))
        lo, hi = math.log(grid[max(i - 1, 0)]), math.log(grid[min(i + 1, len(grid) - 1)])
    else:
        lo, hi = 0.0, math.log(afrag_max)
    t_opt, v_opt = golden_section_max(lambda t: lam(math.exp(t)), lo, hi, tolerance)
    a_opt = math.exp(t_opt)
    best_a, best_v = max(scan, key=lambda s: s[1])
    if best_v > v_opt:
        a_opt, v_opt = best_a, best_v
    interior = tolerance < math.log(a_opt) < math.log(afrag_max) - tolerance
    return SonicationResult(a_opt, v_opt, interior, False, multimodal, len(cache), tuple(scan))
