# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for autocorrelation and the top eigenvalue of a
symmetric Toeplitz matrix.

Must stay call-compatible with :mod:`toepcom._pykernels`.
"""

import numpy as np

from libc.math cimport fabs, sqrt
from scipy.linalg.cython_blas cimport ddot, dgemv


def autocorrelation(const double[::1] a, Py_ssize_t max_lag):
    """Un-normalized autocorrelation ``R(0..max_lag)`` by direct summation."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t tau, i, top
    cdef double s
    out = np.zeros(max_lag + 1, dtype=np.float64)
    cdef double[::1] r = out
    top = max_lag + 1 if max_lag + 1 < n else n
    with nogil:
        for tau in range(top):
            s = 0.0
            for i in range(n - tau):
                s = s + a[i] * a[i + tau]
            r[tau] = s
    return out


cdef inline void _fill_toeplitz(const double[::1] r, double[:, ::1] T) noexcept nogil:
    cdef Py_ssize_t m = r.shape[0]
    cdef Py_ssize_t i, j
    for i in range(m):
        for j in range(i):
            T[i, j] = r[i - j]
        for j in range(i, m):
            T[i, j] = r[j - i]


cdef Py_ssize_t _sturm_count(const double* alpha, const double* beta,
                             Py_ssize_t k, double x) noexcept nogil:
    # number of eigenvalues of the tridiagonal matrix strictly below x
    cdef Py_ssize_t i, count = 0
    cdef double d = 1.0
    cdef double tiny = 1e-300
    for i in range(k):
        if i == 0:
            d = alpha[0] - x
        else:
            d = alpha[i] - x - beta[i] * beta[i] / d
        if fabs(d) < tiny:
            d = -tiny
        if d < 0.0:
            count += 1
    return count


cdef double _tridiag_top(const double* alpha, const double* beta,
                         Py_ssize_t k) noexcept nogil:
    # beta[i] couples rows i-1 and i; beta[0] unused
    cdef Py_ssize_t i, it
    cdef double lo, hi, mid, radius
    lo = alpha[0]
    hi = alpha[0]
    for i in range(k):
        radius = 0.0
        if i > 0:
            radius += fabs(beta[i])
        if i + 1 < k:
            radius += fabs(beta[i + 1])
        if alpha[i] - radius < lo:
            lo = alpha[i] - radius
        if alpha[i] + radius > hi:
            hi = alpha[i] + radius
    for it in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _sturm_count(alpha, beta, k, mid) == k:
            hi = mid
        else:
            lo = mid
    return hi


cdef double _ritz_last_component(const double* alpha, const double* beta,
                                 Py_ssize_t k, double sigma,
                                 double* diag, double* rhs) noexcept nogil:
    # two steps of inverse iteration with (sigma*I - T), positive definite
    # because sigma exceeds the top eigenvalue of T
    cdef Py_ssize_t i, sweep
    cdef double f, nrm
    for i in range(k):
        rhs[i] = 1.0
    for sweep in range(2):
        diag[0] = sigma - alpha[0]
        for i in range(1, k):
            f = -beta[i] / diag[i - 1]
            diag[i] = sigma - alpha[i] + f * beta[i]
            rhs[i] = rhs[i] - f * rhs[i - 1]
        rhs[k - 1] = rhs[k - 1] / diag[k - 1]
        i = k - 2
        while i >= 0:
            rhs[i] = (rhs[i] + beta[i + 1] * rhs[i + 1]) / diag[i]
            i -= 1
        nrm = 0.0
        for i in range(k):
            nrm += rhs[i] * rhs[i]
        nrm = sqrt(nrm)
        for i in range(k):
            rhs[i] = rhs[i] / nrm
    return rhs[k - 1]


def toeplitz_lambda_max(const double[::1] first_row, const double[::1] v0,
                        double rtol=1e-12, Py_ssize_t maxiter=0):
    """Largest eigenvalue of the symmetric Toeplitz matrix with ``first_row``.

    Lanczos with full reorthogonalization, started from ``v0``. Stops when
    the Ritz residual drops below ``rtol`` times the Ritz value, or when the
    Krylov space is exhausted. Returns ``(theta, iterations)``.
    """
    cdef Py_ssize_t m = first_row.shape[0]
    if v0.shape[0] != m:
        raise ValueError("start vector length must match the matrix order")
    if m == 1:
        return float(first_row[0]), 1
    if maxiter <= 0 or maxiter > m:
        maxiter = m

    V_arr = np.zeros((maxiter + 1, m), dtype=np.float64)
    cdef double[:, ::1] V = V_arr
    T_arr = np.empty((m, m), dtype=np.float64)
    cdef double[:, ::1] T = T_arr
    w_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] w = w_arr
    ab = np.zeros(5 * (maxiter + 2), dtype=np.float64)
    cdef double[::1] work = ab
    cdef double* alpha = &work[0]
    cdef double* beta = &work[maxiter + 2]
    cdef double* diag = &work[2 * (maxiter + 2)]
    cdef double* rhs = &work[3 * (maxiter + 2)]
    cdef double* coef = &work[4 * (maxiter + 2)]

    cdef Py_ssize_t i, j, p
    cdef double nrm = 0.0, c, b, theta = 0.0, s_last, scale, shift
    cdef Py_ssize_t iters = 0
    cdef int fm = <int>m, one = 1, ncols
    cdef double d_one = 1.0, d_zero = 0.0, d_mone = -1.0
    cdef char tr_n = b'N', tr_t = b'T'

    scale = 0.0
    for i in range(m):
        scale += fabs(first_row[i])
    for i in range(m):
        nrm += v0[i] * v0[i]
    nrm = sqrt(nrm)
    if nrm == 0.0:
        raise ValueError("start vector must be nonzero")
    if scale == 0.0:
        return 0.0, 0

    with nogil:
        _fill_toeplitz(first_row, T)
        for i in range(m):
            V[0, i] = v0[i] / nrm
        beta[0] = 0.0
        for j in range(maxiter):
            iters = j + 1
            # T is symmetric, so row/column-major order does not matter
            dgemv(&tr_n, &fm, &fm, &d_one, &T[0, 0], &fm, &V[j, 0], &one,
                  &d_zero, &w[0], &one)
            c = ddot(&fm, &w[0], &one, &V[j, 0], &one)
            alpha[j] = c
            for i in range(m):
                w[i] = w[i] - c * V[j, i]
            if j > 0:
                for i in range(m):
                    w[i] = w[i] - beta[j] * V[j - 1, i]
            # rows of V are the Lanczos vectors; as a column-major matrix
            # V is m x (j+1)
            ncols = <int>(j + 1)
            for p in range(2):
                dgemv(&tr_t, &fm, &ncols, &d_one, &V[0, 0], &fm, &w[0], &one,
                      &d_zero, coef, &one)
                dgemv(&tr_n, &fm, &ncols, &d_mone, &V[0, 0], &fm, coef, &one,
                      &d_one, &w[0], &one)
            b = sqrt(ddot(&fm, &w[0], &one, &w[0], &one))
            theta = _tridiag_top(alpha, beta, j + 1)
            if j + 1 == m or b <= 1e-14 * scale:
                break
            shift = theta + 1e-10 * fabs(theta) + 1e-300
            s_last = _ritz_last_component(alpha, beta, j + 1, shift, diag, rhs)
            if fabs(b * s_last) <= rtol * fabs(theta):
                break
            beta[j + 1] = b
            for i in range(m):
                V[j + 1, i] = w[i] / b
    return theta, iters
