"""Closed-form tail bounds and the Gaussian quadratic-form MGF.

Every bound returns a probability clamped to 1; pass ``raw=True`` to get the
unclamped formula value instead. Epsilon-type arguments accept arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .analysis import CovarianceToeplitz


class DomainError(ValueError):
    """Argument outside the domain where a bound or identity holds."""


@dataclass(frozen=True)
class TailBoundQuery:
    epsilon: float
    m: int
    functional: float

    def __post_init__(self):
        _check_eps(self.epsilon)
        _check_m(self.m)
        _check_positive(self.functional, "functional")


def _check_eps(eps):
    e = np.asarray(eps, dtype=np.float64)
    if np.any(~(e > 0)) or np.any(~(e < 1)):
        raise DomainError("epsilon must lie in (0, 1)")
    return e


def _check_m(m):
    if m < 1:
        raise DomainError("m must be >= 1")


def _check_positive(x, name):
    if not np.all(np.asarray(x) > 0):
        raise DomainError(f"{name} must be positive")


def _finish(value, raw):
    value = value if raw else np.minimum(value, 1.0)
    return float(value) if np.ndim(value) == 0 else value


def toeplitz_upper_tail(epsilon, m, rho, raw=False):
    """exp(-eps^2 M / (8 rho))."""
    e = _check_eps(epsilon)
    _check_m(m)
    _check_positive(rho, "rho")
    return _finish(np.exp(-(e**2) * m / (8.0 * rho)), raw)


def toeplitz_lower_tail(epsilon, m, mu, raw=False):
    """exp(-eps^2 M / (8 mu))."""
    e = _check_eps(epsilon)
    _check_m(m)
    _check_positive(mu, "mu")
    return _finish(np.exp(-(e**2) * m / (8.0 * mu)), raw)


def unstructured_tail(epsilon, m, raw=False):
    """2 exp(-eps^2 M / 4), the two-sided bound for i.i.d. Gaussian X."""
    e = _check_eps(epsilon)
    _check_m(m)
    return _finish(2.0 * np.exp(-(e**2) * m / 4.0), raw)


def tail_bound(query: TailBoundQuery, side: str = "upper", raw=False):
    if side == "upper":
        return toeplitz_upper_tail(query.epsilon, query.m, query.functional, raw)
    if side == "lower":
        return toeplitz_lower_tail(query.epsilon, query.m, query.functional, raw)
    raise ValueError(f"side must be 'upper' or 'lower', not {side!r}")


def gaussian_quadratic_mgf(P, t: float) -> float:
    """E[exp(t y^T y)] for y ~ N(0, P), i.e. det(I - 2tP)^(-1/2).

    Evaluated as a product over the eigenvalues of P. Valid only for
    t < 1 / (2 lambda_max(P)).
    """
    if isinstance(P, CovarianceToeplitz):
        lam = P.eigenvalues()
    else:
        P = np.atleast_2d(np.asarray(P, dtype=np.float64))
        lam = scipy.linalg.eigvalsh(P)
    lam_max = float(np.max(lam))
    if lam_max > 0 and not t < 1.0 / (2.0 * lam_max):
        raise DomainError(f"MGF diverges for t={t} >= 1/(2 lambda_max)={1 / (2 * lam_max)}")
    factors = 1.0 - 2.0 * t * lam
    return float(np.exp(-0.5 * np.sum(np.log(factors))))


def squared_gaussian_lower_tail(k, sigma_sq, epsilon, raw=False):
    """Bound exp(-K eps^2 / 4) on P(||q||^2 <= K sigma^2 (1 - eps)).

    ``sigma_sq`` only fixes the event; the bound itself does not depend on it.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    _check_positive(sigma_sq, "sigma_sq")
    e = np.asarray(epsilon, dtype=np.float64)
    if np.any(~(e > 0)):
        raise DomainError("epsilon must be positive")
    return _finish(np.exp(-k * e**2 / 4.0), raw)


def hoeffding_complex_tail(b_norm_sq, sigma_sq, u, real=False, raw=False):
    """Tail bound on |sum_i eps_i b_i| >= u for eps_i ~ N(0, sigma^2).

    Complex b: 2 exp(-u^2 / (4 sigma^2 ||b||^2)).
    Real b (``real=True``): exp(-u^2 / (2 sigma^2 ||b||^2)).
    """
    _check_positive(b_norm_sq, "b_norm_sq")
    _check_positive(sigma_sq, "sigma_sq")
    u = np.asarray(u, dtype=np.float64)
    if np.any(u < 0):
        raise DomainError("u must be non-negative")
    if real:
        val = np.exp(-(u**2) / (2.0 * sigma_sq * b_norm_sq))
    else:
        val = 2.0 * np.exp(-(u**2) / (4.0 * sigma_sq * b_norm_sq))
    return _finish(val, raw)


def circulant_eigenvalue_tail(k, l, nu_k_sq, u, raw=False):
    """Bound 2 exp(-u^2 K / (4 L nu_K^2)) on P(|lambda_i(A_c)| >= u).

    ``nu_k_sq`` is the squared K-sparse Fourier coherence.
    """
    if k < 1 or l < 1:
        raise DomainError("k and l must be >= 1")
    _check_positive(nu_k_sq, "nu_k_sq")
    u = np.asarray(u, dtype=np.float64)
    if np.any(u < 0):
        raise DomainError("u must be non-negative")
    return _finish(2.0 * np.exp(-(u**2) * k / (4.0 * l * nu_k_sq)), raw)
