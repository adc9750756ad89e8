"""CSV files for plotting: ``#`` header lines, a column row, 15 significant digits."""
from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .. import __version__

DIGITS = 15


def _cell(v):
    if isinstance(v, float):
        return format(v, f".{DIGITS}g")
    return str(v)


def csv_text(columns: Sequence[str], rows: Iterable[Sequence], digest: str = "",
             comments: Sequence[str] = ()) -> str:
    """CSV text headed by the library version and the config digest; no timestamps."""
    buf = io.StringIO()
    buf.write(f"# growfrag {__version__}\n")
    buf.write(f"# config-sha256 {digest}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def sweep_csv(curve, digest: str = "") -> str:
    """Columns: parameter, eigenvalue, route, iterations, residual, R, N, extremum, error."""
    marks = {p: kind for kind, p, _ in curve.extrema}
    rows = [(s.parameter, s.eigenvalue, s.route, s.iterations, s.residual, s.R, s.N,
             marks.get(s.parameter, ""), s.error) for s in curve.samples]
    return csv_text(("parameter", "eigenvalue", "route", "iterations", "residual", "R", "N",
                     "extremum", "error"), rows, digest,
                    (f"mode {curve.mode}", f"monotone {curve.monotone}"))


def steady_states_csv(report, digest: str = "") -> str:
    """Columns: V, mu0_minus_lambda, root, rho (``mu0 - lambda_V`` on the search grid plus the roots)."""
    rows = [(v, report.mu0 - lam, "", "") for v, lam in zip(report.grid_V, report.grid_eigenvalues)]
    rows += [(r.V, report.mu0 - r.eigenvalue, "root", r.rho) for r in report.roots]
    rows.sort(key=lambda r: r[0])
    return csv_text(("V", "mu0_minus_lambda", "root", "rho"), rows, digest,
                    (f"mu0 {report.mu0!r}", f"xi {report.xi!r}", f"delta {report.delta!r}",
                     f"V_bar {report.V_bar!r}", f"lambda_at_V_bar {report.eigenvalue_at_vbar!r}",
                     f"disease_free {report.disease_free_stability or 'marginal'}"))


def sonication_csv(result, digest: str = "") -> str:
    """Columns: afrag, Lambda, optimum (the scan plus the optimum row)."""
    rows = [(a, v, "") for a, v in result.scan]
    rows.append((result.afrag_opt, result.Lambda_opt, "optimum"))
    rows.sort(key=lambda r: (r[0], r[2]))
    return csv_text(("afrag", "Lambda", "optimum"), rows, digest,
                    (f"interior {result.interior}", f"degenerate {result.degenerate}",
                     f"multimodal {result.multimodal}"))
