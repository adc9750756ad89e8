# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled time-stepping kernels; see growfrag._kernels_py for the reference version."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef void _gain(const double[::1] beta, const double[::1] kcol, const double[:, ::1] kmat,
                bint colconst, double dx, const double[::1] u, double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0], i, j
    cdef double acc
    if colconst:
        acc = 0.0
        for i in range(n - 1, -1, -1):
            acc += kcol[i] * beta[i] * u[i]
            out[i] = 2.0 * dx * acc
    else:
        for i in range(n):
            acc = 0.0
            for j in range(i, n):
                acc += kmat[i, j] * beta[j] * u[j]
            out[i] = 2.0 * dx * acc


cdef void _step(const double[::1] tau, const double[::1] beta, const double[::1] kcol,
                const double[:, ::1] kmat, bint colconst, double dx, double dt,
                const double[::1] u, double shift, bint implicit_inflow,
                double[::1] out, double[::1] work) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0], i
    cdef double sp = shift if shift > 0.0 else 0.0
    cdef double sm = -shift if shift < 0.0 else 0.0
    cdef double inflow = 0.0
    _gain(beta, kcol, kmat, colconst, dx, u, work)
    for i in range(n):
        out[i] = (u[i] * (1.0 + dt * sm) + dt * (inflow / dx + work[i])) \
            / (1.0 + dt * (tau[i] / dx + beta[i] + sp))
        if implicit_inflow:
            inflow = tau[i] * out[i]
        else:
            inflow = tau[i] * u[i]


def _views(tau, beta, kcol, kmat):
    n = tau.shape[0]
    colconst = kcol is not None
    if colconst:
        kmat = np.zeros((1, 1))
    else:
        kcol = np.zeros(1)
    return (np.ascontiguousarray(tau, dtype=np.float64), np.ascontiguousarray(beta, dtype=np.float64),
            np.ascontiguousarray(kcol, dtype=np.float64), np.ascontiguousarray(kmat, dtype=np.float64),
            colconst)


def semi_implicit_step(tau, beta, kcol, kmat, double dx, double dt, u,
                       double shift=0.0, bint implicit_inflow=False):
    """One unnormalized step; see growfrag._kernels_py.semi_implicit_step."""
    t, b, kc, km, colconst = _views(tau, beta, kcol, kmat)
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    out = np.empty(t.shape[0])
    work = np.empty(t.shape[0])
    _step(t, b, kc, km, colconst, dx, dt, uv, shift, implicit_inflow, out, work)
    return out


def iterate(tau, beta, kcol, kmat, double dx, double dt, u0, double epsilon,
            long max_iters, bint implicit_inflow=True, bint shifted=True):
    """Step and renormalize until the stop test passes; returns ``(u, iterations, increment)``.

    ``iterations == -1`` signals that the mass vanished.
    """
    t, b, kc, km, cc = _views(tau, beta, kcol, kmat)
    cdef bint colconst = cc
    cdef const double[::1] tv = t
    cdef const double[::1] bv = b
    cdef Py_ssize_t n = t.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ua = np.array(u0, dtype=np.float64, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] va = np.empty(n)
    cdef double[::1] u = ua
    cdef double[::1] v = va
    cdef double[::1] work = np.empty(n)
    cdef const double[::1] kcv = kc
    cdef const double[:, ::1] kmv = km
    cdef double shift, mass, inc = np.inf
    cdef long it = 0
    with nogil:
        while it < max_iters:
            shift = 0.0
            if shifted:
                for i in range(n):
                    shift += bv[i] * u[i]
                shift = dx * shift - tv[n - 1] * u[n - 1]
            _step(tv, bv, kcv, kmv, colconst, dx, dt, u, shift, implicit_inflow, v, work)
            mass = 0.0
            for i in range(n):
                mass += v[i]
            mass *= dx
            it += 1
            if not mass > 0.0:
                it = -1
                break
            inc = 0.0
            for i in range(n):
                v[i] /= mass
                inc += fabs(v[i] - u[i])
                u[i] = v[i]
            inc *= dx / dt
            if inc < epsilon:
                break
    return np.asarray(u).copy(), it, inc
