"""Problem files and solver settings.

A problem file is INI-like text read with :mod:`configparser`::

    [tau]
    kind = rational_power      ; a * x**p / (c + b * x**q)
    a = 8
    p = 0.2
    c = 1
    b = 2
    q = 4.2

    [beta]
    kind = power_law           ; prefactor * x**exponent
    prefactor = 1
    exponent = 0

    [kernel]
    kind = uniform             ; or symmetric_beta (shape), tabulated (s, f), point_mass (at)

    [modulation]
    mode = polymerization      ; or fragmentation
    value = 1

    [solver]
    R = 10
    N = 400

    [run]
    parameter_min = 1e-3

Tabulated rates take ``x`` and ``f`` as comma-separated lists plus optional
``exponent_zero`` and ``exponent_infinity``. Only ``[tau]`` and ``[beta]``
are required. Unknown sections or keys are errors. The keys accepted in
``[solver]`` and ``[run]`` are listed in ``SOLVER_KEYS`` and ``RUN_KEYS``.
"""
from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Dict, Optional

from .coefficients import (MODES, KernelModel, PowerLaw, ProblemSpec,
                           RateModel, RationalPower, Tabulated)
from .eigensolver import SCHEMES, IterationConfig
from .errors import ConfigParseError, ConfigurationError, GrowFragError
from .grid import Grid, build_grid

METHODS = ("time_stepping", "dense_oracle")


@dataclass(frozen=True)
class SolverSettings:
    """Grid, iteration and truncation settings shared by every command.

    ``dt = None`` picks the step automatically. ``strict`` also rejects
    problems failing the existence checks.
    """

    R: float = 10.0
    N: int = 400
    dt: Optional[float] = None
    epsilon: float = 1e-8
    max_iters: int = 500_000
    scheme: str = "implicit_upwind"
    initial: str = "gaussian"
    eps_tail: float = 1e-6
    max_doublings: int = 4
    method: str = "time_stepping"
    strict: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(f"method must be one of {METHODS}")
        if not self.eps_tail > 0:
            raise ConfigurationError("eps_tail must be positive")
        if self.max_doublings < 0:
            raise ConfigurationError("max_doublings must be nonnegative")
        self.grid()
        self.iteration()

    def grid(self) -> Grid:
        return build_grid(self.R, self.N)

    def iteration(self) -> IterationConfig:
        return IterationConfig(dt=self.dt, epsilon=self.epsilon, max_iters=self.max_iters,
                               initial=self.initial, scheme=self.scheme)

    def with_overrides(self, **kw) -> "SolverSettings":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_RATE_KEYS = {
    "power_law": ("prefactor", "exponent"),
    "rational_power": ("a", "p", "c", "b", "q"),
    "tabulated": ("x", "f", "exponent_zero", "exponent_infinity"),
}
_KERNEL_KEYS = {
    "uniform": (),
    "symmetric_beta": ("shape",),
    "tabulated": ("s", "f"),
    "point_mass": ("at",),
}
SOLVER_KEYS = tuple(f.name for f in fields(SolverSettings))
RUN_KEYS = ("parameter_min", "parameter_max", "points", "limit", "decades",
            "base", "coefficient", "exponent", "mu0", "xi", "delta", "v_min",
            "afrag_max", "tolerance")
_SECTIONS = ("tau", "beta", "kernel", "modulation", "solver", "run")


def _float(section, key, text):
    try:
        value = float(text)
    except ValueError:
        raise ConfigParseError(f"[{section}] {key}: expected a number, got {text!r}") from None
    if math.isnan(value):
        raise ConfigParseError(f"[{section}] {key}: NaN is not allowed")
    return value


def _optional_float(section, key, text):
    if text.strip().lower() in ("", "none", "auto"):
        return None
    return _float(section, key, text)


def _float_list(section, key, text):
    return [_float(section, key, t) for t in text.replace("\n", ",").split(",") if t.strip()]


def _int(section, key, text):
    value = _float(section, key, text)
    if value != int(value):
        raise ConfigParseError(f"[{section}] {key}: expected an integer, got {text!r}")
    return int(value)


def _bool(section, key, text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigParseError(f"[{section}] {key}: expected a boolean, got {text!r}")


def _check_keys(section, items, allowed):
    unknown = sorted(set(items) - set(allowed))
    if unknown:
        raise ConfigParseError(f"[{section}] unknown key(s): {', '.join(unknown)}")


def _rate(section, items) -> RateModel:
    kind = items.pop("kind", None)
    if kind not in _RATE_KEYS:
        raise ConfigParseError(f"[{section}] kind must be one of {sorted(_RATE_KEYS)}, got {kind!r}")
    _check_keys(section, items, _RATE_KEYS[kind])
    try:
        if kind == "power_law":
            return PowerLaw(_float(section, "prefactor", items["prefactor"]),
                            _float(section, "exponent", items["exponent"]))
        if kind == "rational_power":
            vals = {k: _float(section, k, items[k]) for k in ("a", "p", "c")}
            vals.update({k: _float(section, k, items[k]) for k in ("b", "q") if k in items})
            return RationalPower(**vals)
        return Tabulated(_float_list(section, "x", items["x"]), _float_list(section, "f", items["f"]),
                         _optional_float(section, "exponent_zero", items.get("exponent_zero", "none")),
                         _optional_float(section, "exponent_infinity",
                                         items.get("exponent_infinity", "none")))
    except KeyError as exc:
        raise ConfigParseError(f"[{section}] missing key {exc.args[0]!r}") from None


def _kernel(items) -> KernelModel:
    kind = items.pop("kind", "uniform")
    if kind not in _KERNEL_KEYS:
        raise ConfigParseError(f"[kernel] kind must be one of {sorted(_KERNEL_KEYS)}, got {kind!r}")
    _check_keys("kernel", items, _KERNEL_KEYS[kind])
    try:
        if kind == "uniform":
            return KernelModel.uniform()
        if kind == "symmetric_beta":
            return KernelModel.symmetric_beta(_float("kernel", "shape", items["shape"]))
        if kind == "tabulated":
            return KernelModel.tabulated(_float_list("kernel", "s", items["s"]),
                                         _float_list("kernel", "f", items["f"]))
        return KernelModel.point_mass(_float("kernel", "at", items.get("at", "0.5")))
    except KeyError as exc:
        raise ConfigParseError(f"[kernel] missing key {exc.args[0]!r}") from None


def _solver(items) -> SolverSettings:
    _check_keys("solver", items, SOLVER_KEYS)
    kw = {}
    for key, text in items.items():
        if key in ("N", "max_iters", "max_doublings"):
            kw[key] = _int("solver", key, text)
        elif key == "dt":
            kw[key] = _optional_float("solver", key, text)
        elif key in ("scheme", "initial", "method"):
            kw[key] = text.strip()
        elif key == "strict":
            kw[key] = _bool("solver", key, text)
        else:
            kw[key] = _float("solver", key, text)
    return SolverSettings(**kw)


def _run(items) -> Dict[str, object]:
    _check_keys("run", items, RUN_KEYS)
    out = {}
    for key, text in items.items():
        if key == "limit":
            out[key] = text.strip().lower()
        elif key in ("points", "decades"):
            out[key] = _int("run", key, text)
        else:
            out[key] = _float("run", key, text)
    return out


@dataclass(frozen=True)
class ProblemFile:
    """Parsed problem file: the problem, the solver settings and run arguments."""

    spec: ProblemSpec
    solver: SolverSettings
    run: Dict[str, object]

    def digest(self) -> str:
        """SHA-256 of the canonical text, independent of layout and comments."""
        return hashlib.sha256(format_problem(self).encode("utf-8")).hexdigest()


def parse_problem(text: str) -> ProblemFile:
    """Parse problem-file text.

    Raises
    ------
    ConfigParseError
        On syntax errors, unknown sections or keys, missing or malformed
        values, or parameters outside a family's domain.
    """
    # keys stay case sensitive so that R and N read as written
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"),
                                   delimiters=("=",))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigParseError(f"cannot parse problem file: {exc}") from None
    unknown = sorted(set(cp.sections()) - set(_SECTIONS))
    if unknown:
        raise ConfigParseError(f"unknown section(s): {', '.join(unknown)}")
    for required in ("tau", "beta"):
        if not cp.has_section(required):
            raise ConfigParseError(f"missing section [{required}]")

    def items(name):
        return {k.strip(): v.strip() for k, v in cp.items(name)} if cp.has_section(name) else {}

    try:
        tau = _rate("tau", items("tau"))
        beta = _rate("beta", items("beta"))
        kernel = _kernel(items("kernel"))
        mod = items("modulation")
        _check_keys("modulation", mod, ("mode", "value"))
        mode = mod.get("mode", "polymerization")
        if mode not in MODES:
            raise ConfigParseError(f"[modulation] mode must be one of {MODES}, got {mode!r}")
        value = _float("modulation", "value", mod.get("value", "1"))
        spec = ProblemSpec(tau, beta, kernel, mode, value)
        return ProblemFile(spec, _solver(items("solver")), _run(items("run")))
    except ConfigParseError:
        raise
    except (GrowFragError, ValueError, TypeError) as exc:
        raise ConfigParseError(str(exc)) from None


def load_problem(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(float(v)) for v in value)
    return str(value)


def _section(name, pairs):
    lines = [f"[{name}]"]
    lines += [f"{k} = {_fmt(v)}" for k, v in pairs]
    return "\n".join(lines)


def format_spec(spec: ProblemSpec) -> str:
    """Problem-file text for ``spec``; :func:`parse_problem` reads it back unchanged."""
    blocks = []
    for name, rate in (("tau", spec.tau), ("beta", spec.beta)):
        blocks.append(_section(name, [("kind", rate.kind)] + list(rate.params().items())))
    blocks.append(_section("kernel", [("kind", spec.kernel.kind)] + list(spec.kernel.params().items())))
    blocks.append(_section("modulation", [("mode", spec.mode), ("value", spec.value)]))
    return "\n\n".join(blocks) + "\n"


def format_problem(problem: ProblemFile) -> str:
    """Canonical text of a full problem file, solver and run sections included."""
    solver = asdict(problem.solver)
    text = format_spec(problem.spec)
    text += "\n" + _section("solver", sorted(solver.items())) + "\n"
    if problem.run:
        text += "\n" + _section("run", sorted(problem.run.items())) + "\n"
    return text
