"""Growth rate, division rate and fragmentation kernel models.

Rates are parametric families with known power-like behaviour at ``0`` and
``+inf``. The exponents and prefactors at both ends drive the dilation used in
:mod:`growfrag.rescale` and the structural checks in
:func:`validate_assumptions`.

Kernels are homogeneous, ``kappa(x, y) = kappa_tilde(x / y) / y`` with
``kappa_tilde`` a probability density on ``[0, 1]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import special

from .errors import DomainError, ExtrapolationError

INF = math.inf

POLYMERIZATION = "polymerization"
FRAGMENTATION = "fragmentation"
MODES = (POLYMERIZATION, FRAGMENTATION)

# tolerance on the kernel moment identities
MOMENT_TOL = 1e-8


def as_limit(at) -> float:
    """Coerce ``at`` to one of the two limits ``0.0`` or ``inf``."""
    if isinstance(at, str):
        at = {"0": 0.0, "inf": INF, "infinity": INF}.get(at.strip().lower(), at)
    try:
        at = float(at)
    except (TypeError, ValueError):
        raise DomainError(f"limit must be 0 or inf, got {at!r}") from None
    if at == 0.0 or at == INF:
        return at
    raise DomainError(f"limit must be 0 or inf, got {at!r}")


def _power_limit(prefactor, exponent, at):
    """lim_{x -> at} prefactor * x**exponent, prefactor > 0."""
    if exponent == 0:
        return prefactor
    if (at == 0.0) == (exponent > 0):
        return 0.0
    return INF


# ---------------------------------------------------------------------------
# rates
# ---------------------------------------------------------------------------

class RateModel:
    """Common interface of the rate families.

    Subclasses evaluate vectorised on ``x >= 0`` through :meth:`__call__`
    and describe the behaviour ``f(x) ~ prefactor(L) * x**exponent(L)`` as
    ``x -> L`` for ``L`` in ``{0, inf}``.
    """

    kind = "abstract"

    def __call__(self, x):
        raise NotImplementedError

    def exponent(self, at) -> float:
        raise NotImplementedError

    def prefactor(self, at) -> float:
        raise NotImplementedError

    def positive_on_compacts(self) -> bool:
        """Whether ``inf f > 0`` on every compact of ``(0, inf)``."""
        raise NotImplementedError

    def params(self) -> Dict[str, object]:
        """Parameters as written in a problem file, ``kind`` excluded."""
        raise NotImplementedError

    def limit(self, at, shift: float = 0.0) -> float:
        """``lim_{x -> at} f(x) / x**shift`` from the declared asymptotics."""
        at = as_limit(at)
        return _power_limit(self.prefactor(at), self.exponent(at) - shift, at)


@dataclass(frozen=True)
class PowerLaw(RateModel):
    """``f(x) = coefficient * x**power``."""

    coefficient: float
    power: float
    kind = "power_law"

    def __post_init__(self):
        if not (np.isfinite(self.coefficient) and self.coefficient > 0):
            raise DomainError("power_law prefactor must be positive")
        if not np.isfinite(self.power):
            raise DomainError("power_law exponent must be finite")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.power == 0:
            return np.full_like(x, self.coefficient)
        with np.errstate(divide="ignore"):
            return self.coefficient * np.power(x, self.power)

    def exponent(self, at):
        as_limit(at)
        return float(self.power)

    def prefactor(self, at):
        as_limit(at)
        return float(self.coefficient)

    def positive_on_compacts(self):
        return True

    def params(self):
        return {"prefactor": self.coefficient, "exponent": self.power}


@dataclass(frozen=True)
class RationalPower(RateModel):
    """``f(x) = a * x**p / (c + b * x**q)``.

    With ``b > 0`` the denominator must grow at infinity (``q > 0``) so that
    the exponents are ``p`` at ``0`` and ``p - q`` at ``inf``.
    """

    a: float
    p: float
    c: float
    b: float = 0.0
    q: float = 0.0
    kind = "rational_power"

    def __post_init__(self):
        vals = (self.a, self.p, self.c, self.b, self.q)
        if not all(np.isfinite(v) for v in vals):
            raise DomainError("rational_power parameters must be finite")
        if self.a <= 0 or self.c <= 0:
            raise DomainError("rational_power needs a > 0 and c > 0")
        if self.b < 0:
            raise DomainError("rational_power needs b >= 0")
        if self.b > 0 and self.q <= 0:
            raise DomainError("rational_power needs q > 0 when b > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            num = self.a * (np.power(x, self.p) if self.p != 0 else np.ones_like(x))
            if self.b == 0:
                return num / self.c
            den = self.c + self.b * np.power(x, self.q)
            out = num / den
            # x**p and x**q both overflow far out; use the asymptote
            far = ~np.isfinite(out) & np.isfinite(x) & (x > 1)
            if np.any(far):
                out = np.where(far, self.a / self.b * np.power(x, self.p - self.q), out)
            return out

    def exponent(self, at):
        at = as_limit(at)
        if at == INF and self.b > 0:
            return float(self.p - self.q)
        return float(self.p)

    def prefactor(self, at):
        at = as_limit(at)
        if at == INF and self.b > 0:
            return float(self.a / self.b)
        return float(self.a / self.c)

    def positive_on_compacts(self):
        return True

    def params(self):
        return {"a": self.a, "p": self.p, "c": self.c, "b": self.b, "q": self.q}


@dataclass(frozen=True, eq=False)
class Tabulated(RateModel):
    """Piecewise-linear interpolation of samples with power-law tails.

    Below the first sample the rate follows ``f_0 (x / x_0)**exponent_zero``,
    above the last one ``f_n (x / x_n)**exponent_infinity``. A tail whose
    exponent is ``None`` cannot be extrapolated.
    """

    xs: np.ndarray
    fs: np.ndarray
    exponent_zero: Optional[float] = None
    exponent_infinity: Optional[float] = None
    kind = "tabulated"

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float).copy()
        fs = np.asarray(self.fs, dtype=float).copy()
        if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
            raise DomainError("tabulated rate needs two matching 1-d sample arrays")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(fs))):
            raise DomainError("tabulated samples must be finite")
        if xs[0] < 0 or np.any(np.diff(xs) <= 0):
            raise DomainError("tabulated sample points must be nonnegative and strictly increasing")
        if np.any(fs < 0):
            raise DomainError("tabulated values must be nonnegative")
        xs.setflags(write=False)
        fs.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "fs", fs)

    def __eq__(self, other):
        if not isinstance(other, Tabulated):
            return NotImplemented
        return (np.array_equal(self.xs, other.xs) and np.array_equal(self.fs, other.fs)
                and self.exponent_zero == other.exponent_zero
                and self.exponent_infinity == other.exponent_infinity)

    __hash__ = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xs, fs = self.xs, self.fs
        out = np.interp(x, xs, fs)
        below = x < xs[0]
        above = x > xs[-1]
        if np.any(below):
            if self.exponent_zero is None:
                raise ExtrapolationError("tabulated rate queried below its first sample")
            with np.errstate(divide="ignore"):
                out = np.where(below, fs[0] * np.power(x / xs[0], self.exponent_zero), out)
        if np.any(above):
            if self.exponent_infinity is None:
                raise ExtrapolationError("tabulated rate queried beyond its last sample "
                                         "without a tail exponent")
            out = np.where(above, fs[-1] * np.power(x / xs[-1], self.exponent_infinity), out)
        return out

    def exponent(self, at):
        at = as_limit(at)
        e = self.exponent_zero if at == 0.0 else self.exponent_infinity
        if e is None:
            raise ExtrapolationError(f"no tail exponent declared at {at}")
        return float(e)

    def prefactor(self, at):
        at = as_limit(at)
        if at == 0.0:
            x0, f0 = self.xs[0], self.fs[0]
            if x0 == 0:
                return float(f0)
        else:
            x0, f0 = self.xs[-1], self.fs[-1]
        return float(f0 / x0 ** self.exponent(at))

    def positive_on_compacts(self):
        inner = self.fs if self.xs[0] > 0 else self.fs[1:]
        if np.any(inner <= 0):
            return False
        # segments between positive samples stay positive under linear interpolation
        return True

    def params(self):
        return {"x": list(map(float, self.xs)), "f": list(map(float, self.fs)),
                "exponent_zero": self.exponent_zero,
                "exponent_infinity": self.exponent_infinity}


def eval_rate(model: RateModel, x):
    """Evaluate a rate at ``x >= 0``; scalars in, float out.

    Raises
    ------
    DomainError
        If any ``x`` is negative or NaN.
    ExtrapolationError
        For a tabulated rate queried past a tail with no declared exponent.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("rates are defined on x >= 0")
    out = model(arr)
    return float(out) if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

_GAUSS_S, _GAUSS_W = np.polynomial.legendre.leggauss(3)


@dataclass(frozen=True, eq=False)
class KernelModel:
    """Profile ``kappa_tilde`` of a homogeneous fragmentation kernel.

    Use the constructors :meth:`uniform`, :meth:`symmetric_beta`,
    :meth:`tabulated` and :meth:`point_mass`. ``moments`` holds the
    zeroth, first and second moments of the profile.

    A point mass has no density. It exists so that :func:`validate_assumptions`
    can report on it, and the discretization rejects it.
    """

    kind: str
    shape: float = 1.0
    nodes: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    moments: Tuple[float, float, float] = field(default=(1.0, 0.5, 1.0 / 3.0))

    # -- constructors -----------------------------------------------------
    @classmethod
    def uniform(cls) -> "KernelModel":
        """``kappa_tilde = 1``: fragments of any size are equally likely."""
        return cls("uniform", 1.0, moments=(1.0, 0.5, 1.0 / 3.0))

    @classmethod
    def symmetric_beta(cls, shape: float) -> "KernelModel":
        """``kappa_tilde(s) ∝ (s (1 - s))**(shape - 1)``; ``shape = 1`` is uniform."""
        shape = float(shape)
        if not (np.isfinite(shape) and shape > 0):
            raise DomainError("symmetric_beta shape must be positive")
        m2 = (shape + 1.0) / (2.0 * (2.0 * shape + 1.0))
        return cls("symmetric_beta", shape, moments=(1.0, 0.5, m2))

    @classmethod
    def tabulated(cls, nodes, values) -> "KernelModel":
        """Piecewise-linear profile through ``(nodes, values)``, ``nodes`` covering [0, 1].

        The samples are not rescaled: a profile that is not a probability
        density is kept as given and flagged by :func:`validate_assumptions`.
        """
        s = np.asarray(nodes, dtype=float).copy()
        v = np.asarray(values, dtype=float).copy()
        if s.ndim != 1 or s.shape != v.shape or s.size < 2:
            raise DomainError("tabulated kernel needs two matching 1-d sample arrays")
        if s[0] != 0.0 or s[-1] != 1.0 or np.any(np.diff(s) <= 0):
            raise DomainError("tabulated kernel nodes must increase from 0 to 1")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise DomainError("tabulated kernel values must be finite and nonnegative")
        s.setflags(write=False)
        v.setflags(write=False)
        return cls("tabulated", 1.0, s, v, moments=_piecewise_linear_moments(s, v))

    @classmethod
    def point_mass(cls, at: float = 0.5) -> "KernelModel":
        """Dirac profile at ``at``; ``at = 1/2`` is equal mitosis."""
        at = float(at)
        if not 0 < at <= 1:
            raise DomainError("point mass location must lie in (0, 1]")
        return cls("point_mass", at, moments=(1.0, at, at * at))

    # -- evaluation -------------------------------------------------------
    @property
    def has_density(self) -> bool:
        return self.kind != "point_mass"

    def density(self, s):
        """Profile density at ``s`` in ``[0, 1]``; zero outside."""
        s = np.asarray(s, dtype=float)
        inside = (s >= 0) & (s <= 1)
        if self.kind == "uniform":
            out = np.ones_like(s)
        elif self.kind == "symmetric_beta":
            a = self.shape
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.power(s * (1.0 - s), a - 1.0) / special.beta(a, a)
        elif self.kind == "tabulated":
            out = np.interp(s, self.nodes, self.values)
        else:
            raise DomainError("a point-mass kernel has no density")
        return np.where(inside, out, 0.0)

    def cdf(self, s):
        """``int_0^s kappa_tilde``, for ``s`` in ``[0, 1]``."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        if self.kind == "uniform":
            return s.copy()
        if self.kind == "symmetric_beta":
            return special.betainc(self.shape, self.shape, s)
        if self.kind == "tabulated":
            nodes, vals = self.nodes, self.values
            seg = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(nodes) * (vals[1:] + vals[:-1]))])
            i = np.clip(np.searchsorted(nodes, s, side="right") - 1, 0, nodes.size - 2)
            h = s - nodes[i]
            slope = (vals[i + 1] - vals[i]) / (nodes[i + 1] - nodes[i])
            return seg[i] + vals[i] * h + 0.5 * slope * h * h
        return np.where(s >= self.shape, 1.0, 0.0)

    def small_fragment_exponent(self) -> Tuple[float, float]:
        """Largest ``g >= 0`` and some ``C`` with ``cdf(s) <= min(1, C s**g)``.

        The exponent is read off the behaviour of the profile at ``s = 0``.
        """
        if self.kind == "uniform":
            return 1.0, 1.0
        if self.kind == "symmetric_beta":
            a = self.shape
            # on s <= 1/2 the factor (1-s)**(a-1) is at most 2**(1-a); above 1/2, C 2**-a >= 1
            c = max(1.0, 2.0 ** (1.0 - a)) / (a * special.beta(a, a))
            return a, max(c, 2.0 ** a)
        if self.kind == "tabulated":
            v0 = self.values[0]
            g = 1.0 if v0 > 0 else 2.0
            # bound C from the sampled cdf over a fine grid
            s = np.linspace(0.0, 1.0, 4097)[1:]
            return g, float(np.max(self.cdf(s) / s ** g))
        return INF, 1.0

    def __eq__(self, other):
        if not isinstance(other, KernelModel):
            return NotImplemented
        same = self.kind == other.kind and self.shape == other.shape
        if self.kind == "tabulated":
            same = same and np.array_equal(self.nodes, other.nodes) \
                and np.array_equal(self.values, other.values)
        return same

    __hash__ = None

    def params(self) -> Dict[str, object]:
        if self.kind == "symmetric_beta":
            return {"shape": self.shape}
        if self.kind == "tabulated":
            return {"s": list(map(float, self.nodes)), "f": list(map(float, self.values))}
        if self.kind == "point_mass":
            return {"at": self.shape}
        return {}


def _piecewise_linear_moments(s, v):
    # Gauss rule with three nodes is exact for the cubic integrands s**k * linear
    a, b = s[:-1], s[1:]
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * _GAUSS_S[None, :]
    dens = np.interp(pts, s, v)
    w = half[:, None] * _GAUSS_W[None, :]
    return tuple(float(np.sum(w * dens * pts ** k)) for k in range(3))


def eval_kernel_density(kernel: KernelModel, x, y):
    """``kappa(x, y) = kappa_tilde(x / y) / y`` for ``0 <= x``, ``y > 0``; zero when ``x > y``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError("kernel defined for x >= 0")
    if np.any(np.isnan(y)) or np.any(y <= 0):
        raise DomainError("kernel defined for y > 0")
    out = kernel.density(x / y) / y
    out = np.where(x <= y, out, 0.0)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# problem and checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemSpec:
    """Coefficients plus one modulation.

    ``mode = "polymerization"`` multiplies ``tau`` by ``value``;
    ``mode = "fragmentation"`` multiplies ``beta`` (and so the gain) by it.
    """

    tau: RateModel
    beta: RateModel
    kernel: KernelModel = field(default_factory=KernelModel.uniform)
    mode: str = POLYMERIZATION
    value: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "value", float(self.value))

    def with_value(self, value: float) -> "ProblemSpec":
        return replace(self, value=float(value))

    @property
    def tau_scale(self) -> float:
        return self.value if self.mode == POLYMERIZATION else 1.0

    @property
    def beta_scale(self) -> float:
        return self.value if self.mode == FRAGMENTATION else 1.0

    def effective_tau(self, x):
        return self.tau_scale * self.tau(x)

    def effective_beta(self, x):
        return self.beta_scale * self.beta(x)


STRUCTURAL = "structural"
EXISTENCE = "existence"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    severity: str
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_assumptions`.

    Structural failures always make a problem unusable. Existence failures
    mean the theory does not guarantee an eigenpair; the discrete problem may
    still be solved unless ``strict`` is requested.
    """

    checks: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def blocking(self, strict: bool = False) -> List[CheckResult]:
        return [c for c in self.failures if strict or c.severity == STRUCTURAL]

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    def format(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status} {c.name} [{c.severity}] {c.detail}".rstrip())
        return "\n".join(lines)


def _exponents(model, at):
    try:
        return model.exponent(at)
    except ExtrapolationError:
        return None


def validate_assumptions(spec: ProblemSpec) -> ValidationReport:
    """Check the hypotheses that guarantee a positive eigenpair.

    Asymptotic conditions are checked on the declared exponents, never
    numerically.
    """
    checks = []
    kern = spec.kernel
    m0, m1, m2 = kern.moments

    ok = np.isfinite(spec.value) and spec.value > 0
    checks.append(CheckResult("modulation_positive", bool(ok), STRUCTURAL,
                              f"value={spec.value:g}"))

    ok = abs(m0 - 1.0) <= MOMENT_TOL and abs(m1 - 0.5) <= MOMENT_TOL
    checks.append(CheckResult("kernel_moments", bool(ok), STRUCTURAL,
                              f"mass={m0:.12g} mean={m1:.12g}"))

    checks.append(CheckResult("kernel_second_moment", bool(m2 < 0.5), STRUCTURAL,
                              f"second moment={m2:.12g}"))

    ok = kern.has_density
    checks.append(CheckResult("kernel_density", bool(ok), STRUCTURAL,
                              f"kind={kern.kind}"))

    ok = spec.tau.positive_on_compacts() and spec.beta.positive_on_compacts()
    checks.append(CheckResult("rates_positive", bool(ok), STRUCTURAL,
                              "tau and beta positive on compacts of (0, inf)"))

    nu0, g0 = _exponents(spec.tau, 0.0), _exponents(spec.beta, 0.0)
    nui, gi = _exponents(spec.tau, INF), _exponents(spec.beta, INF)

    if nu0 is None or g0 is None:
        checks.append(CheckResult("division_integrable_at_zero", False, EXISTENCE,
                                  "exponent at 0 not declared"))
    else:
        checks.append(CheckResult("division_integrable_at_zero", g0 - nu0 > -1, EXISTENCE,
                                  f"gamma-nu={g0 - nu0:g} at 0, need > -1"))

    if nui is None or gi is None:
        checks.append(CheckResult("division_dominates_at_infinity", False, EXISTENCE,
                                  "exponent at inf not declared"))
    else:
        checks.append(CheckResult("division_dominates_at_infinity", 1 + gi - nui > 0, EXISTENCE,
                                  f"1+gamma-nu={1 + gi - nui:g} at inf, need > 0"))

    g_kern, _ = kern.small_fragment_exponent()
    if nu0 is None:
        checks.append(CheckResult("small_fragments_integrable", False, EXISTENCE,
                                  "exponent at 0 not declared"))
    else:
        # x**g / tau integrable near 0 for the best admissible g
        checks.append(CheckResult("small_fragments_integrable", g_kern + 1 - nu0 > 0, EXISTENCE,
                                  f"g+1-nu={g_kern + 1 - nu0:g} at 0, need > 0"))

    return ValidationReport(tuple(checks))
