import os
import shutil
import subprocess
import sys

import pytest

from growfrag import __version__
from growfrag.cli import main
from growfrag.config import load_problem

PROBLEMS = os.path.join(os.path.dirname(__file__), os.pardir, "problems")


def problem(name):
    return os.path.join(PROBLEMS, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_hump_file_passes(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", problem("hump_polymerization.ini"), "-o", str(tmp_path))
    assert code == 0 and "FAIL" not in out
    assert (tmp_path / "validate.txt").read_text().startswith(f"# growfrag {__version__}\n")


def test_validate_reports_existence_failures(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", problem("linear_growth.ini"), "-o", str(tmp_path))
    assert code == 3 and "FAIL division_dominates_at_infinity" in out


def test_solve_writes_an_eigenpair_with_unit_eigenvalue(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", problem("linear_growth.ini"), "-o", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "eigenpair.txt").read_text().splitlines()
    digest = load_problem(problem("linear_growth.ini")).digest()
    assert lines[0] == f"# growfrag {__version__}" and lines[1] == f"# config-sha256 {digest}"
    lam = float(next(l for l in lines if l.startswith("# lambda = ")).split("=")[1])
    assert abs(lam - 1.0) <= 1e-3
    assert "residual" in (tmp_path / "summary.txt").read_text()


def test_sweep_flags_the_interior_maximum(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", problem("hump_polymerization.ini"), "-o", str(tmp_path))
    assert code == 0 and out.startswith("max ")
    rows = [l.split(",") for l in (tmp_path / "sweep.csv").read_text().splitlines()
            if not l.startswith("#")]
    assert rows[0][:2] == ["parameter", "eigenvalue"] and len(rows) == 26
    flagged = [r for r in rows[1:] if r[7] == "max"]
    assert len(flagged) == 1 and flagged[0] not in (rows[1], rows[-1])


def test_outputs_are_byte_identical(capsys, tmp_path):
    for sub in ("a", "b"):
        assert run(capsys, "sweep", problem("hump_fragmentation.ini"), "-o", str(tmp_path / sub),
                   "--min", "0.1", "--max", "10", "--points", "5")[0] == 0
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()


def test_solver_overrides_apply(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", problem("hump_polymerization.ini"), "-o", str(tmp_path), "--N", "200",
                       "--R", "10")
    assert code == 0
    assert "# N = " in (tmp_path / "eigenpair.txt").read_text()


@pytest.mark.parametrize("command,extra,name", [
    ("limits", ["--limit", "inf", "--decades", "3"], "limits.txt"),
    ("pmca", ["--afrag-max", "3"], "pmca.csv"),
    ("prion", ["--points", "9"], "prion.csv"),
])
def test_other_commands_write_their_reports(capsys, tmp_path, command, extra, name):
    source = "hump_fragmentation.ini" if command == "pmca" else ("prion.ini" if command == "prion" else "hump_polymerization.ini")
    code, _, _ = run(capsys, command, problem(source), "-o", str(tmp_path), *extra)
    assert code == 0
    assert (tmp_path / name).read_text().startswith(f"# growfrag {__version__}\n")


def test_expansion_command(capsys, tmp_path):
    src = tmp_path / "affine.ini"
    src.write_text("[tau]\nkind = power_law\nprefactor = 1\nexponent = 0.5\n"
                   "[beta]\nkind = tabulated\nx = 0, 1e8\nf = 1, 100000001\n"
                   "exponent_zero = 0\nexponent_infinity = 1\n"
                   "[run]\nbase = 1\ncoefficient = 1\nexponent = 1\n")
    code, out, _ = run(capsys, "expansion", str(src), "-o", str(tmp_path))
    assert code == 0 and "predicted_exponent = 2" in out


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[tau]\nkind = power_law\nprefactor = 1\nexponent = 1\n[bogus]\n")
    code, _, err = run(capsys, "solve", str(bad), "-o", str(tmp_path))
    assert code == 2 and err.startswith("error=config_parse ")


def test_strict_validation_failure_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "solve", problem("linear_growth.ini"), "--strict", "-o", str(tmp_path))
    assert code == 3 and err.startswith("error=validation ")


def test_non_convergence_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "solve", problem("hump_polymerization.ini"), "--max-iters", "2", "-o", str(tmp_path))
    assert code == 4 and err.startswith("error=nonconvergence ")
    assert not (tmp_path / "eigenpair.txt").exists()


def test_io_error_exit_code(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "validate", problem("hump_polymerization.ini"), "-o", str(blocker / "sub"))
    assert code == 5 and err.startswith("error=io ")
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.ini"))
    assert code == 5


def test_missing_command_argument_is_a_config_error(capsys, tmp_path):
    code, _, err = run(capsys, "prion", problem("hump_polymerization.ini"), "-o", str(tmp_path))
    assert code == 2 and "mu0" in err


def test_bad_override_is_rejected_by_argparse(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", problem("hump_polymerization.ini"), "--N", "-5"])
    assert info.value.code == 2


@pytest.mark.skipif(shutil.which("growfrag") is None, reason="console script not installed")
def test_console_script(tmp_path):
    done = subprocess.run(["growfrag", "validate", problem("hump_polymerization.ini"), "-o", str(tmp_path)],
                          capture_output=True, text=True)
    assert done.returncode == 0


def test_module_entry_point(tmp_path):
    done = subprocess.run([sys.executable, "-m", "growfrag.cli", "--version"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and __version__ in done.stdout
