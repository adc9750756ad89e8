"""Pure numpy time-stepping kernels, used when the compiled module is absent."""
import numpy as np
from scipy.linalg import solve_banded


def gain(beta, kcol, kmat, dx, u):
    """``2 dx sum_{j >= i} K[i, j] beta_j u_j``."""
    bu = beta * u
    if kcol is not None:
        return 2.0 * dx * np.cumsum((kcol * bu)[::-1])[::-1]
    return 2.0 * dx * (kmat @ bu)


def semi_implicit_step(tau, beta, kcol, kmat, dx, dt, u, shift=0.0, implicit_inflow=False):
    """One unnormalized step of the positive semi-implicit scheme.

    Losses (outflux and division) are implicit, the fragmentation gain is
    explicit. The upwind inflow ``tau_{i-1} u_{i-1} / dx`` uses the old
    vector unless ``implicit_inflow``, in which case the lower bidiagonal
    system is solved. ``shift`` adds an eigenvalue estimate to the loss when
    positive and to the source when negative.
    """
    u = np.asarray(u, dtype=float)
    sp, sm = max(shift, 0.0), max(-shift, 0.0)
    rhs = u * (1.0 + dt * sm) + dt * gain(beta, kcol, kmat, dx, u)
    diag = 1.0 + dt * (tau / dx + beta + sp)
    if not implicit_inflow:
        inflow = np.empty_like(u)
        inflow[0] = 0.0
        inflow[1:] = tau[:-1] * u[:-1]
        return (rhs + dt * inflow / dx) / diag
    ab = np.empty((2, u.size))
    ab[0] = diag
    ab[1, :-1] = -dt * tau[:-1] / dx
    ab[1, -1] = 0.0
    return solve_banded((1, 0), ab, rhs, check_finite=False)


def iterate(tau, beta, kcol, kmat, dx, dt, u0, epsilon, max_iters,
            implicit_inflow=True, shifted=True):
    """Step and renormalize until the stop test passes; returns ``(u, iterations, increment)``.

    ``iterations == -1`` signals that the mass vanished.
    """
    u = np.array(u0, dtype=float, copy=True)
    inc = np.inf
    it = 0
    while it < max_iters:
        shift = dx * np.dot(beta, u) - tau[-1] * u[-1] if shifted else 0.0
        v = semi_implicit_step(tau, beta, kcol, kmat, dx, dt, u, shift, implicit_inflow)
        mass = dx * v.sum()
        it += 1
        if not mass > 0:
            return u, -1, inc
        v /= mass
        inc = dx / dt * np.abs(v - u).sum()
        u = v
        if inc < epsilon:
            break
    return u, it, inc
