import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from growfrag import (DilationPlan, dense_oracle_eigenpair, KernelModel, PowerLaw, ProblemSpec, build_discrete_problem,
                      build_grid, build_rescaled_problem, dilation_exponent, limit_profile_problem,
                      make_plan, recover_eigenvalue, solve_rescaled, validate_assumptions)
from growfrag.coefficients import FRAGMENTATION, INF
from growfrag.eigensolver import solve_adaptive
from growfrag.errors import IllPosedRegimeError, PlanError
from growfrag.rescale import RescaledRates, limit_plan_and_prefactors

from conftest import HUMP_TAU, frag_spec, hump_spec

GRID = build_grid(10.0, 400)

# limit eigenvalue of tau = 8 x**0.2, beta = x**3 / 15 with the uniform kernel, from the
# dense oracle on the adaptive grid started at R=10, N=400 (ends at R=20, dx=0.025)
THETA_INF_HUMP_AT_ZERO = 3.249993515659756


def test_dilation_exponent_values():
    assert dilation_exponent(0.2, 3.0) == pytest.approx(1 / 3.8)
    assert dilation_exponent(0.0, 0.0) == 1.0
    with pytest.raises(IllPosedRegimeError):
        dilation_exponent(1.0, 0.0)


def test_plan_uses_the_exponents_of_the_regime():
    small, large = make_plan(hump_spec(1e-3)), make_plan(hump_spec(1e3))
    assert small.L == 0.0 and (small.nu, small.gamma) == (0.2, 3.0)
    assert large.L == INF and large.nu == pytest.approx(-4.0) and large.gamma == pytest.approx(-1.5)
    frag = make_plan(frag_spec(1e3))
    assert frag.L == 0.0 and frag.l == -frag.k


def test_plan_must_match_the_problem():
    plan = make_plan(hump_spec(1e-3))
    with pytest.raises(PlanError):
        build_rescaled_problem(hump_spec(1e3), plan, GRID)
    with pytest.raises(PlanError):
        DilationPlan(0.0, 0.2, 3.0, 0.5)


def test_unit_parameter_reproduces_the_direct_problem():
    spec = hump_spec(1.0)
    direct = build_discrete_problem(spec, GRID)
    rescaled = build_rescaled_problem(spec, make_plan(spec), GRID)
    assert np.allclose(direct.tau_vec, rescaled.tau_vec, rtol=1e-15)
    assert np.allclose(direct.beta_vec, rescaled.beta_vec, rtol=1e-15)


@given(st.floats(1e-6, 1e6))
def test_pure_powers_are_fixed_by_the_dilation(alpha):
    spec = ProblemSpec(PowerLaw(2.0, 0.5), PowerLaw(0.3, 1.5), value=alpha)
    rates = RescaledRates(spec, make_plan(spec))
    x = GRID.x
    assert np.allclose(rates.effective_tau(x), 2.0 * x ** 0.5, rtol=1e-12)
    assert np.allclose(rates.effective_beta(x), 0.3 * x ** 1.5, rtol=1e-12)


def test_dilated_growth_rate_approaches_its_power_law():
    alpha = 1e-4
    k = 1 / 3.8
    rates = RescaledRates(hump_spec(alpha), make_plan(hump_spec(alpha)))
    direct = alpha ** (-0.2 * k) * HUMP_TAU(alpha ** k)
    assert rates.effective_tau(np.array([1.0]))[0] == pytest.approx(direct, rel=1e-14)
    assert direct == pytest.approx(8.0 / (1.0 + 2.0 * 10 ** (-4 * 4.2 / 3.8)), rel=1e-12)
    assert abs(direct - 8.0) < 1e-3


def test_recover_eigenvalue_identities():
    plan = make_plan(hump_spec(0.5))
    assert recover_eigenvalue(0.7, 1.0, plan) == 0.7
    flat = DilationPlan(0.0, 0.5, 0.0, dilation_exponent(0.5, 0.0))
    for alpha in (1e-3, 0.3, 1.0):
        assert recover_eigenvalue(0.7, alpha, flat) == 0.7


@pytest.mark.parametrize("alpha", [0.25, 4.0])
def test_rescaled_solve_agrees_with_direct(alpha):
    spec = hump_spec(alpha)
    direct, _ = solve_adaptive(spec, lambda g: build_discrete_problem(spec, g), GRID)
    res = solve_rescaled(spec, GRID)
    assert res.eigenvalue == pytest.approx(direct.eigenvalue, rel=5e-3)


def test_fragmentation_routes_converge_together():
    # at a = 4 the direct grid resolves a 4x faster division; the route gap is first order
    spec = frag_spec(4.0)
    gaps = []
    for n in (800, 1600, 3200):
        grid = build_grid(10.0, n)
        direct, _ = solve_adaptive(spec, lambda g: build_discrete_problem(spec, g), grid)
        gaps.append(abs(direct.eigenvalue / solve_rescaled(spec, grid).eigenvalue - 1.0))
    assert gaps[-1] <= 5e-3
    assert all(1.8 < a / b < 2.2 for a, b in zip(gaps, gaps[1:])), gaps


def test_original_profile_keeps_unit_mass():
    res = solve_rescaled(hump_spec(1e-3), GRID)
    x, u = res.original_profile()
    assert (x[1] - x[0]) * u.sum() == pytest.approx(1.0, rel=1e-12)
    assert x[-1] == pytest.approx(res.solution.grid.R * 1e-3 ** (1 / 3.8))


def _theta_inf(spec, L):
    plan, pref = limit_plan_and_prefactors(spec, L)
    lim = ProblemSpec(PowerLaw(pref[0], plan.nu), PowerLaw(pref[1], plan.gamma), spec.kernel)
    sol, _ = solve_adaptive(lim, lambda g: limit_profile_problem(plan, pref, spec.kernel, g), GRID,
                            method="dense_oracle")
    return sol


def test_limit_eigenvalue_regression():
    sol = _theta_inf(hump_spec(), 0.0)
    assert sol.eigenvalue == pytest.approx(THETA_INF_HUMP_AT_ZERO, rel=1e-9)
    assert sol.residual < 1e-10


def test_rescaled_eigenvalues_approach_the_limit():
    theta_inf = _theta_inf(hump_spec(), 0.0)
    grid = theta_inf.grid
    gaps, dists = [], []
    for alpha in (1e-1, 1e-2, 1e-3, 1e-4):
        spec = hump_spec(alpha)
        plan = make_plan(spec)
        problem = build_rescaled_problem(spec, plan, grid)
        sol = dense_oracle_eigenpair(problem)
        gaps.append(abs(sol.eigenvalue - theta_inf.eigenvalue))
        dists.append(grid.dx * np.abs(sol.u_vec - theta_inf.u_vec).sum())
    assert all(a > b for a, b in zip(gaps, gaps[1:])), gaps
    assert all(a > b for a, b in zip(dists, dists[1:])), dists


def test_limit_problem_with_decreasing_division_is_accepted():
    # the large-size exponents of the hump rates: gamma = -1.5 but beta / tau stays integrable at 0
    plan = DilationPlan(INF, -4.0, -1.5, dilation_exponent(-4.0, -1.5))
    spec = ProblemSpec(PowerLaw(4.0, -4.0), PowerLaw(1.0, -1.5), KernelModel.uniform())
    assert validate_assumptions(spec).passed
    problem = limit_profile_problem(plan, (4.0, 1.0), KernelModel.uniform(), GRID)
    assert problem.grid == GRID


def test_limit_with_constant_division_is_ill_posed():
    with pytest.raises(IllPosedRegimeError):
        limit_plan_and_prefactors(ProblemSpec(PowerLaw(1.0, 1.0), PowerLaw(1.0, 0.0)), 0.0)
