"""Pure-Python (numpy/scipy) versions of the compiled kernels.

Same call signatures and return conventions as ``toepcom._ckernels``.
"""

import numpy as np
import scipy.linalg


def autocorrelation(a, max_lag):
    """Un-normalized autocorrelation ``R(0..max_lag)`` by direct summation."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    n = a.shape[0]
    out = np.zeros(max_lag + 1)
    top = min(max_lag + 1, n)
    for tau in range(top):
        out[tau] = np.dot(a[: n - tau], a[tau:])
    return out


def toeplitz_lambda_max(first_row, v0, rtol=1e-12, maxiter=0):
    """Largest eigenvalue of the symmetric Toeplitz matrix with ``first_row``.

    Lanczos with full reorthogonalization; see the compiled twin for the
    stopping rule. Returns ``(theta, iterations)``.
    """
    r = np.ascontiguousarray(first_row, dtype=np.float64)
    v0 = np.ascontiguousarray(v0, dtype=np.float64)
    m = r.shape[0]
    if v0.shape[0] != m:
        raise ValueError("start vector length must match the matrix order")
    if m == 1:
        return float(r[0]), 1
    if maxiter <= 0 or maxiter > m:
        maxiter = m
    nrm = np.linalg.norm(v0)
    if nrm == 0.0:
        raise ValueError("start vector must be nonzero")
    scale = np.abs(r).sum()
    if scale == 0.0:
        return 0.0, 0

    T = scipy.linalg.toeplitz(r)
    V = np.zeros((maxiter + 1, m))
    V[0] = v0 / nrm
    alpha = np.zeros(maxiter)
    beta = np.zeros(maxiter + 1)
    theta = 0.0
    iters = 0
    for j in range(maxiter):
        iters = j + 1
        w = T @ V[j]
        alpha[j] = w @ V[j]
        w -= alpha[j] * V[j]
        if j > 0:
            w -= beta[j] * V[j - 1]
        for _ in range(2):
            w -= V[: j + 1].T @ (V[: j + 1] @ w)
        b = np.linalg.norm(w)
        if j == 0:
            theta, s_last = alpha[0], 1.0
        else:
            vals, vecs = scipy.linalg.eigh_tridiagonal(
                alpha[: j + 1], beta[1 : j + 1], select="i", select_range=(j, j)
            )
            theta, s_last = vals[0], vecs[-1, 0]
        if j + 1 == m or b <= 1e-14 * scale:
            break
        if abs(b * s_last) <= rtol * abs(theta):
            break
        beta[j + 1] = b
        V[j + 1] = w / b
    return float(theta), iters
