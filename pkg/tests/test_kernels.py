"""The compiled and numpy time-stepping kernels agree, and one step behaves as designed."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from growfrag import BACKEND, KernelModel, build_discrete_problem, build_grid
from growfrag.eigensolver import step_semi_implicit
from growfrag.kernels import BACKENDS, get_backend

from conftest import frag_spec, hump_spec

N = 24
requires_compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
vectors = arrays(np.float64, N, elements=st.floats(0.0, 10.0))


def _problem(kernel):
    from dataclasses import replace
    return build_discrete_problem(replace(hump_spec(), kernel=kernel), build_grid(3.0, N))


def _args(problem):
    kmat = None if problem.column_constant else problem.kernel_mat
    return problem.tau_vec, problem.beta_vec, problem.kernel_col, kmat, problem.dx


def test_compiled_backend_is_active_when_built():
    import os
    assert BACKEND in BACKENDS
    if "cython" in BACKENDS and not os.environ.get("GROWFRAG_BACKEND"):
        assert BACKEND == "cython"


def test_unknown_backend_is_rejected():
    with pytest.raises(ValueError):
        get_backend("fortran")


@requires_compiled
@settings(max_examples=60, deadline=None)
@given(vectors, st.floats(1e-3, 10.0), st.floats(-2.0, 2.0), st.booleans(), st.booleans())
def test_single_step_agrees(u, dt, shift, implicit, beta_kernel):
    kernel = KernelModel.symmetric_beta(2.0) if beta_kernel else KernelModel.uniform()
    args = _args(_problem(kernel))
    a = get_backend("python").semi_implicit_step(*args, dt, u, shift, implicit)
    b = get_backend("cython").semi_implicit_step(*args, dt, u, shift, implicit)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


@requires_compiled
@pytest.mark.parametrize("implicit", [True, False])
@pytest.mark.parametrize("kernel", [KernelModel.uniform(), KernelModel.symmetric_beta(0.5)],
                         ids=["uniform", "beta"])
def test_full_iteration_agrees(implicit, kernel):
    problem = _problem(kernel)
    args = _args(problem)
    dt = 1.0 / problem.beta_vec.max() if implicit else 0.5 * problem.dx / problem.tau_vec.max()
    u0 = np.full(N, 1.0 / problem.grid.R)
    ua, ita, _ = get_backend("python").iterate(*args, dt, u0, 1e-9, 200_000, implicit, True)
    ub, itb, _ = get_backend("cython").iterate(*args, dt, u0, 1e-9, 200_000, implicit, True)
    assert abs(ita - itb) <= 1
    assert np.allclose(ua, ub, rtol=1e-8)


@settings(max_examples=40, deadline=None)
@given(vectors.filter(lambda u: u.sum() > 0), st.floats(1e-3, 10.0))
def test_step_preserves_positivity(u, dt):
    problem = build_discrete_problem(frag_spec(), build_grid(3.0, N))
    assert np.all(step_semi_implicit(problem, u, dt) >= 0)


def test_zero_vector_is_a_fixed_point():
    problem = build_discrete_problem(hump_spec(), build_grid(3.0, N))
    assert np.all(step_semi_implicit(problem, np.zeros(N), 0.1) == 0)


def test_vanishing_rates_leave_the_vector_unchanged():
    from growfrag.grid import assemble
    g = build_grid(3.0, N)
    problem = assemble(np.zeros(N), np.zeros(N), KernelModel.uniform(), g)
    u = np.linspace(1.0, 2.0, N)
    assert np.array_equal(step_semi_implicit(problem, u, 0.3), u)


def test_single_node_mass_moves_right_and_fragments_left():
    g = build_grid(1.0, 16)
    problem = build_discrete_problem(hump_spec(), g)
    k = 7
    u = np.zeros(16)
    u[k] = 1.0
    dt = 0.01
    v = step_semi_implicit(problem, u, dt)
    t, b, dx = problem.tau_vec, problem.beta_vec, g.dx
    # hand computation: outflux and division implicit, inflow and gain explicit
    gain = 2 * dx * problem.kernel_mat[:, k] * b[k]
    expected = dt * gain
    expected[k] += 1.0
    expected[k + 1] += dt * t[k] / dx
    expected /= 1.0 + dt * (t / dx + b)
    assert np.allclose(v, expected, rtol=1e-14)
    assert np.all(v[k + 2:] == 0) and np.all(v[: k + 2] > 0)


def test_benchmark_script_runs():
    import subprocess
    import sys
    from pathlib import Path
    script = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    done = subprocess.run([sys.executable, str(script), "--sizes", "32", "--repeat", "1"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and "python" in done.stdout
