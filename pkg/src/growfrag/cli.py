"""Command-line entry point.

Usage::

    growfrag COMMAND PROBLEM_FILE [-o OUTDIR] [solver overrides] [command options]

Commands: ``solve``, ``sweep``, ``limits``, ``expansion``, ``prion``,
``pmca`` and ``validate``. The problem-file grammar is documented in
:mod:`growfrag.config`; command options fall back to the ``[run]``
section, then to built-in defaults.

Exit codes: 0 success, 2 configuration or parse error, 3 failed assumption
checks, 4 solver non-convergence, 5 I/O error. Failures print one line
``error=<category> <message>`` on stderr.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import __version__
from .analysis import (check_limit_law, find_disease_steady_states, fit_critical_expansion,
                       log_parameters, optimize_sonication, solve_at, sweep_eigenvalue)
from .analysis.output import sonication_csv, steady_states_csv, sweep_csv
from .analysis.pmca import SonicationError
from .coefficients import validate_assumptions
from .config import ProblemFile, load_problem
from .eigensolver import save_eigenpair
from .errors import (CollapseError, ConfigParseError, ConfigurationError, DomainError,
                     NonConvergenceError, OracleError, PlanError, RejectedSpecError)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4
EXIT_IO = 5

COMMANDS = ("solve", "sweep", "limits", "expansion", "prion", "pmca", "validate")


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="growfrag",
                                     description="Principal eigenpairs of growth-fragmentation problems.")
    parser.add_argument("--version", action="version", version=f"growfrag {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", help="problem file")
    common.add_argument("-o", "--output", default=".", help="output directory (default: .)")
    g = common.add_argument_group("solver overrides")
    g.add_argument("--R", type=_positive, help="truncation radius")
    g.add_argument("--N", type=_positive_int, help="number of cells")
    g.add_argument("--dt", type=_positive, help="time step")
    g.add_argument("--epsilon", type=_positive, help="stop tolerance")
    g.add_argument("--max-iters", type=_positive_int, dest="max_iters")
    g.add_argument("--scheme", choices=("implicit_upwind", "semi_implicit"))
    g.add_argument("--method", choices=("time_stepping", "dense_oracle"))
    g.add_argument("--strict", action="store_true", default=None,
                   help="also reject problems failing the existence checks")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="eigenpair at the file's modulation value")
    p = sub.add_parser("sweep", parents=[common], help="eigenvalue over a log-spaced range")
    p.add_argument("--min", type=_positive, dest="parameter_min")
    p.add_argument("--max", type=_positive, dest="parameter_max")
    p.add_argument("--points", type=_positive_int)
    p = sub.add_parser("limits", parents=[common], help="asymptotic laws toward 0 or inf")
    p.add_argument("--limit", choices=("0", "inf"))
    p.add_argument("--decades", type=_positive_int)
    p = sub.add_parser("expansion", parents=[common], help="first correction near a nonzero limit")
    p.add_argument("--base", type=_positive)
    p.add_argument("--coefficient", type=float)
    p.add_argument("--exponent", type=_positive)
    p = sub.add_parser("prion", parents=[common], help="disease steady states")
    p.add_argument("--mu0", type=_positive)
    p.add_argument("--xi", type=_positive)
    p.add_argument("--delta", type=_positive)
    p.add_argument("--v-min", type=_positive, dest="v_min")
    p.add_argument("--points", type=_positive_int)
    p = sub.add_parser("pmca", parents=[common], help="sonication strength maximizing growth")
    p.add_argument("--afrag-max", type=float, dest="afrag_max")
    p.add_argument("--tolerance", type=_positive)
    sub.add_parser("validate", parents=[common], help="assumption report")
    return parser


def _arg(args, problem: ProblemFile, name, default=None, required=False):
    value = getattr(args, name, None)
    if value is None:
        value = problem.run.get(name, default)
    if value is None and required:
        raise ConfigurationError(f"missing value for {name}: pass --{name.replace('_', '-')} "
                                 f"or set it in [run]")
    return value


def _header(problem: ProblemFile, command: str):
    return (f"growfrag {__version__}", f"config-sha256 {problem.digest()}", f"command {command}")


def _write(outdir, name, text):
    path = os.path.join(outdir, name)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _text(problem, command, lines):
    return "".join(f"# {h}\n" for h in _header(problem, command)) + "".join(f"{l}\n" for l in lines)


def run(args) -> int:
    """Execute a parsed command line; returns the exit status."""
    problem = load_problem(args.problem)
    settings = problem.solver.with_overrides(R=args.R, N=args.N, dt=args.dt, epsilon=args.epsilon,
                                             max_iters=args.max_iters, scheme=args.scheme,
                                             method=args.method, strict=args.strict)
    spec = problem.spec
    out = args.output
    cmd = args.command
    files = []

    if cmd == "validate":
        report = validate_assumptions(spec)
        text = report.format()
        print(text)
        files.append(("validate.txt", _text(problem, cmd, text.splitlines())))
        status = EXIT_OK if report.passed else EXIT_VALIDATION
    elif cmd == "solve":
        pt = solve_at(spec, spec.value, settings)
        x, u = pt.profile()
        summary = [f"lambda = {pt.eigenvalue!r}", f"residual = {pt.solution.residual!r}",
                   f"iterations = {pt.solution.iterations}", f"route = {pt.route}"]
        print("\n".join(summary))
        os.makedirs(out, exist_ok=True)
        save_eigenpair(os.path.join(out, "eigenpair.txt"), pt.solution,
                       _header(problem, cmd) + (f"route {pt.route}",), x, u)
        files.append(("summary.txt", _text(problem, cmd, summary)))
        status = EXIT_OK
    elif cmd == "sweep":
        params = log_parameters(_arg(args, problem, "parameter_min", 1e-3),
                                _arg(args, problem, "parameter_max", 1e3),
                                _arg(args, problem, "points", 25))
        curve = sweep_eigenvalue(spec, params, settings)
        for kind, p, v in curve.extrema:
            print(f"{kind} {p:.15g} {v:.15g}")
        print(f"monotone {curve.monotone}")
        files.append(("sweep.csv", sweep_csv(curve, problem.digest())))
        status = EXIT_OK if not curve.gaps else EXIT_SOLVER
    elif cmd == "limits":
        limit = _arg(args, problem, "limit", "0")
        report = check_limit_law(spec, limit, settings=settings,
                                 decades=_arg(args, problem, "decades", 6))
        lines = list(report.lines())
        print("\n".join(lines))
        files.append(("limits.txt", _text(problem, cmd, lines)))
        status = EXIT_OK
    elif cmd == "expansion":
        report = fit_critical_expansion(spec, _arg(args, problem, "base", required=True),
                                        _arg(args, problem, "coefficient", required=True),
                                        _arg(args, problem, "exponent", required=True),
                                        settings=settings)
        lines = list(report.lines())
        print("\n".join(lines))
        files.append(("expansion.txt", _text(problem, cmd, lines)))
        status = EXIT_OK
    elif cmd == "prion":
        report = find_disease_steady_states(spec, _arg(args, problem, "mu0", required=True),
                                            _arg(args, problem, "xi", required=True),
                                            _arg(args, problem, "delta", required=True),
                                            settings=settings,
                                            points=_arg(args, problem, "points", 49),
                                            v_min=_arg(args, problem, "v_min"))
        for r in report.roots:
            print(f"root V={r.V:.15g} rho={r.rho:.15g}")
        print(f"disease_free {report.disease_free_stability or 'marginal'}")
        files.append(("prion.csv", steady_states_csv(report, problem.digest())))
        status = EXIT_OK
    else:
        result = optimize_sonication(spec, _arg(args, problem, "afrag_max", required=True),
                                     _arg(args, problem, "tolerance", 1e-3), settings)
        print(f"afrag_opt {result.afrag_opt:.15g}")
        print(f"Lambda_opt {result.Lambda_opt:.15g}")
        print(f"interior {result.interior}")
        files.append(("pmca.csv", sonication_csv(result, problem.digest())))
        status = EXIT_OK

    os.makedirs(out, exist_ok=True)
    for name, text in files:
        _write(out, name, text)
    return status


def _fail(category, exc, code):
    print(f"error={category} {exc}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigParseError as exc:
        return _fail("config_parse", exc, EXIT_CONFIG)
    except RejectedSpecError as exc:
        return _fail("validation", exc, EXIT_VALIDATION)
    except (NonConvergenceError, CollapseError, OracleError, SonicationError) as exc:
        return _fail("nonconvergence", exc, EXIT_SOLVER)
    except (ConfigurationError, DomainError, PlanError) as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
