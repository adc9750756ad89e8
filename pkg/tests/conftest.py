"""Shared coefficient sets, invariant checks and the acceptance summary hook."""
from __future__ import annotations

import numpy as np
import pytest

from growfrag import KernelModel, PowerLaw, ProblemSpec, RationalPower
from growfrag.coefficients import FRAGMENTATION, POLYMERIZATION

# rates of the two non-monotone examples
HUMP_TAU = RationalPower(8.0, 0.2, 1.0, 2.0, 4.2)
HUMP_BETA = RationalPower(1.0, 3.0, 15.0, 1.0, 4.5)
FRAG_TAU = RationalPower(1.2, 1.8, 1.0, 2.0, 2.8)
FRAG_BETA = RationalPower(4.0, 2.0, 10.0, 1.0, 0.8)


def hump_spec(value=1.0):
    return ProblemSpec(HUMP_TAU, HUMP_BETA, KernelModel.uniform(), POLYMERIZATION, value)


def frag_spec(value=1.0):
    return ProblemSpec(FRAG_TAU, FRAG_BETA, KernelModel.uniform(), FRAGMENTATION, value)


def linear_spec(value=1.0):
    """``tau = x``, ``beta = 1``: eigenvalue 1 for every polymerization multiplier."""
    return ProblemSpec(PowerLaw(1.0, 1.0), PowerLaw(1.0, 0.0), KernelModel.uniform(),
                       POLYMERIZATION, value)


def constant_division_spec(B=1.5, value=1.0):
    """``beta = B`` with fragmentation multiplier ``value``: eigenvalue ``B * value``."""
    return ProblemSpec(PowerLaw(1.0, 0.0), PowerLaw(B, 0.0), KernelModel.uniform(),
                       FRAGMENTATION, value)


def invariant_violations(problem, sol, tol=1e-6):
    """Names of the invariants a converged solution breaks; empty when all hold."""
    x, u, dx, lam = problem.x, sol.u_vec, problem.dx, sol.eigenvalue
    tau, beta = problem.tau_vec, problem.beta_vec
    bad = []
    if abs(dx * u.sum() - 1.0) > 1e-12:
        bad.append("normalization")
    if np.any(u < 0):
        bad.append("positivity")
    spec = problem.spec
    if spec is not None and getattr(spec, "mode", POLYMERIZATION) == FRAGMENTATION:
        # the multiplier sits on beta; tau / x bounds the eigenvalue
        ratio = tau / x
        lo, hi = ratio.min(), ratio.max()
    else:
        lo, hi = beta.min(), beta.max()
    if not (lo - tol * abs(lo) <= lam <= hi + tol * abs(hi)):
        bad.append("eigenvalue_bounds")
    if np.any(tau * u > 2.0 * lam * (1.0 + 10.0 * dx)):
        bad.append("pointwise_flux")
    for r in (1, 2, 3):
        lhs = dx * np.sum(x ** r * u)
        rhs = r / lam * dx * np.sum(x ** (r - 1) * tau * u) * (1.0 + 10.0 * dx)
        if lhs > rhs:
            bad.append(f"moment_{r}")
    return bad


@pytest.fixture
def hump():
    return hump_spec()


@pytest.fixture
def frag():
    return frag_spec()


@pytest.fixture
def linear():
    return linear_spec()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
