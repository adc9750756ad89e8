import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growfrag import KernelModel, PowerLaw, ProblemSpec, RationalPower, Tabulated
from growfrag.config import (ProblemFile, SolverSettings, format_problem, load_problem,
                             parse_problem)
from growfrag.errors import ConfigParseError, ConfigurationError

from conftest import hump_spec

HUMP_TEXT = """
; comment line
[tau]
kind = rational_power   ; trailing comment
a = 8
p = 0.2
c = 1
b = 2
q = 4.2

[beta]
kind = rational_power
a = 1
p = 3
c = 15
b = 1
q = 4.5

[kernel]
kind = uniform

[solver]
R = 10
N = 400

[run]
parameter_min = 1e-3
points = 25
"""


def test_parse_hump_problem():
    pf = parse_problem(HUMP_TEXT)
    assert pf.spec.tau == hump_spec().tau and pf.spec.beta == hump_spec().beta
    assert pf.spec.mode == "polymerization" and pf.spec.value == 1.0
    assert pf.solver.R == 10.0 and pf.solver.N == 400
    assert pf.run == {"parameter_min": 1e-3, "points": 25}


def test_digest_ignores_layout_and_comments():
    a = parse_problem(HUMP_TEXT)
    b = parse_problem(HUMP_TEXT.replace("; comment line", "").replace("a = 8", "a=8.0"))
    assert a.digest() == b.digest()
    c = parse_problem(HUMP_TEXT.replace("a = 8", "a = 8.5"))
    assert a.digest() != c.digest()


@pytest.mark.parametrize("text,fragment", [
    ("[tau]\nkind = power_law\nprefactor = 1\nexponent = 1\n", "beta"),
    (HUMP_TEXT + "\n[extra]\nx = 1\n", "extra"),
    (HUMP_TEXT.replace("N = 400", "N = 400\nM = 3"), "M"),
    (HUMP_TEXT.replace("kind = uniform", "kind = lognormal"), "lognormal"),
    (HUMP_TEXT.replace("a = 8", "a = eight"), "eight"),
    (HUMP_TEXT.replace("a = 8", "a = -8"), ""),
    ("no section here", ""),
])
def test_malformed_files_are_rejected(text, fragment):
    with pytest.raises(ConfigParseError) as info:
        parse_problem(text)
    assert fragment in str(info.value)


def test_bad_solver_values_are_configuration_errors():
    with pytest.raises(ConfigurationError):
        parse_problem(HUMP_TEXT.replace("R = 10", "R = 0")).solver.grid()


def test_overrides_skip_missing_values():
    s = SolverSettings().with_overrides(R=20.0, N=None)
    assert s.R == 20.0 and s.N == SolverSettings().N


def test_load_from_disk(tmp_path):
    path = tmp_path / "p.ini"
    path.write_text(HUMP_TEXT)
    assert load_problem(path).digest() == parse_problem(HUMP_TEXT).digest()


rates = st.one_of(
    st.builds(PowerLaw, st.floats(1e-3, 1e3), st.floats(-3, 3)),
    st.builds(RationalPower, st.floats(1e-3, 1e3), st.floats(0, 3), st.floats(1e-3, 10),
              st.floats(1e-3, 10), st.floats(0.1, 5)),
    st.builds(lambda f, e0, e1: Tabulated([0.5, 1.0, 2.0], f, e0, e1),
              st.lists(st.floats(1e-3, 10), min_size=3, max_size=3),
              st.floats(-1, 2), st.floats(-1, 2)),
)
kernels = st.one_of(st.just(KernelModel.uniform()),
                    st.builds(KernelModel.symmetric_beta, st.floats(0.2, 5)))


@settings(max_examples=60, deadline=None)
@given(rates, rates, kernels, st.sampled_from(["polymerization", "fragmentation"]),
       st.floats(1e-3, 1e3), st.integers(16, 5000), st.floats(0.5, 100))
def test_format_parse_round_trip(tau, beta, kernel, mode, value, N, R):
    pf = ProblemFile(ProblemSpec(tau, beta, kernel, mode, value), SolverSettings(R=R, N=N),
                     {"points": 7, "xi": 2.5})
    back = parse_problem(format_problem(pf))
    assert format_problem(back) == format_problem(pf)
    assert back.spec.tau == tau and back.spec.beta == beta
    assert back.spec.kernel.kind == kernel.kind and back.spec.kernel.shape == kernel.shape
    assert back.solver == pf.solver and back.run == pf.run
