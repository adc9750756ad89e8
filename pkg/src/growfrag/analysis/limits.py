"""Behaviour of the eigenvalue as the modulation goes to 0 or infinity.

With the dilation exponent ``k`` built from the exponents at the size limit
the profiles approach, the eigenvalue tends to ``lim beta`` (polymerization)
or ``lim tau(x) / x`` (fragmentation) and, when that limit is zero, decays
like ``parameter**e`` with ``e = gamma k`` or ``(1 - nu) k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..coefficients import FRAGMENTATION, INF, POLYMERIZATION, ProblemSpec, as_limit
from ..config import SolverSettings
from ..rescale import dilation_exponent
from ._common import solve_at, with_mode

SLOPE_TOL = 0.05


@dataclass(frozen=True)
class BoundCheck:
    """One limsup/liminf comparison; ``passed`` is None when the hypothesis fails or the bound is unquantified."""

    name: str
    applies: bool
    bound: float
    value: float
    passed: Optional[bool]
    detail: str = ""


@dataclass(frozen=True)
class LimitLawReport:
    mode: str
    L: float
    parameters: Tuple[float, ...]
    eigenvalues: Tuple[float, ...]
    predicted_limit: float
    empirical_limit: float
    limit_ok: Optional[bool]
    predicted_exponent: Optional[float] = None
    fitted_slope: Optional[float] = None
    slope_ok: Optional[bool] = None
    diverges: Optional[bool] = None
    bounds: Tuple[BoundCheck, ...] = ()

    def lines(self):
        yield f"mode = {self.mode}"
        yield f"limit = {'inf' if self.L == INF else '0'}"
        for p, v in zip(self.parameters, self.eigenvalues):
            yield f"sample {p:.15g} {v:.15g}"
        yield f"predicted_limit = {self.predicted_limit:.15g}"
        yield f"empirical_limit = {self.empirical_limit:.15g}"
        yield f"limit_ok = {self.limit_ok}"
        if self.predicted_exponent is not None:
            yield f"predicted_exponent = {self.predicted_exponent:.15g}"
            yield f"fitted_slope = {self.fitted_slope:.15g}"
            yield f"slope_ok = {self.slope_ok}"
        if self.diverges is not None:
            yield f"diverges = {self.diverges}"
        for b in self.bounds:
            yield (f"bound {b.name} applies={b.applies} bound={b.bound:.15g} "
                   f"value={b.value:.15g} passed={b.passed}")


def size_limit(mode: str, L: float) -> float:
    """Size limit the profiles approach as the parameter goes to ``L``."""
    if mode == POLYMERIZATION:
        return L
    return INF if L == 0.0 else 0.0


def _slope(params, values):
    lp, lv = np.log(params), np.log(values)
    return float(np.polyfit(lp, lv, 1)[0])


def check_limit_law(spec: ProblemSpec, L, mode: Optional[str] = None,
                    settings: Optional[SolverSettings] = None, decades: int = 6,
                    rel_tol: float = 0.1) -> LimitLawReport:
    """Compare eigenvalues along ``10**±1 .. 10**±decades`` with the asymptotic laws.

    ``limit_ok`` asks the last sample to sit within ``rel_tol`` of a finite
    nonzero predicted limit; for a zero limit the samples must decrease and
    the log-log slope over the last three samples is compared with the
    decay exponent. The default six decades reach the asymptotic regime of
    rates whose corrections fade like ``parameter**(k * small power)``.
    Bound checks pass when the last sample is within ``rel_tol`` times the
    largest sample of the bound.
    """
    settings = settings or SolverSettings()
    spec = with_mode(spec, mode)
    L = as_limit(L)
    sign = -1.0 if L == 0.0 else 1.0
    params = 10.0 ** (sign * np.arange(1, decades + 1, dtype=float))
    values = np.array([solve_at(spec, float(p), settings).eigenvalue for p in params])

    xs = size_limit(spec.mode, L)
    if spec.mode == POLYMERIZATION:
        predicted = spec.beta.limit(xs)
    else:
        predicted = spec.tau.limit(xs, shift=1.0)
    nu, gamma = spec.tau.exponent(xs), spec.beta.exponent(xs)
    k = dilation_exponent(nu, gamma)
    final = float(values[-1])

    exponent = slope = slope_ok = diverges = None
    if math.isinf(predicted):
        limit_ok = None
        diverges = bool(np.all(np.diff(values) > 0) and final > 10 * values[0])
    elif predicted == 0.0:
        exponent = gamma * k if spec.mode == POLYMERIZATION else (1.0 - nu) * k
        slope = _slope(params[-3:], values[-3:])
        slope_ok = slope >= exponent - SLOPE_TOL if L == 0.0 else slope <= exponent + SLOPE_TOL
        limit_ok = bool(np.all(np.diff(values) < 0))
    else:
        limit_ok = abs(final - predicted) <= rel_tol * abs(predicted)

    bounds = _bounds(spec, L, final, values, rel_tol * float(np.max(np.abs(values))))
    return LimitLawReport(spec.mode, L, tuple(map(float, params)), tuple(map(float, values)),
                          float(predicted), final, limit_ok, exponent, slope,
                          None if slope_ok is None else bool(slope_ok), diverges, bounds)


def _bounds(spec, L, final, values, tol):
    tau, beta = spec.tau, spec.beta
    out = []
    if spec.mode == POLYMERIZATION and L == 0.0:
        applies = tau.exponent(INF) <= 1.0
        bound = beta.limit(0.0)
        out.append(BoundCheck("limsup_below_beta_at_zero", applies, bound, final,
                              (final <= bound + tol) if applies else None,
                              "requires tau(x)/x bounded at infinity"))
    elif spec.mode == POLYMERIZATION:
        applies = tau.exponent(0.0) < 1.0
        bound = beta.limit(INF)
        out.append(BoundCheck("liminf_above_beta_at_infinity", applies, bound, final,
                              (final >= bound - tol) if applies else None,
                              "requires 1/tau integrable at zero"))
    elif L == 0.0:
        bound = tau.limit(INF, shift=1.0)
        out.append(BoundCheck("limsup_below_r_tau_over_x_at_infinity", True, bound, final, None,
                              "constant r is not quantified"))
    else:
        applies = beta.exponent(INF) >= 0.0 and tau.exponent(0.0) < 1.0
        grows = bool(np.all(np.diff(values) > 0))
        out.append(BoundCheck("diverges", applies, INF, final, grows if applies else None,
                              "requires liminf beta > 0 at infinity and 1/tau integrable at zero"))
    return tuple(out)
