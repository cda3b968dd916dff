"""Compressive binary detection with a Toeplitz (or unstructured) sensing matrix.

Under E0 the measurements are y = z, under E1 y = Xc + z with z ~ N(0, sigma^2 I).
The Neyman-Pearson test compares d = y^T X c with a threshold gamma; at
false-alarm level alpha, P_D = Q(Q^{-1}(alpha) - ||Xc|| / sigma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize
import scipy.special

from ._parallel import map_trials, trial_rng
from .toeplitz import ToeplitzOperator, apply, apply_batch

STREAM_ROC = 3
ENSEMBLES = ("toeplitz", "unstructured")


def q_function(x):
    """Standard Gaussian upper tail Q(x) = P(Z > x)."""
    out = 0.5 * scipy.special.erfc(np.asarray(x, dtype=np.float64) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def _q_inverse_scalar(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError("q_inverse needs p in (0, 1)")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -_q_inverse_scalar(1.0 - p)
    # bracket grows until Q changes sign around p
    lo, hi = -1.0, 1.0
    while q_function(lo) < p:
        lo *= 2.0
    while q_function(hi) > p:
        hi *= 2.0
    return scipy.optimize.brentq(
        lambda x: q_function(x) - p, lo, hi,
        xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500,
    )


def q_inverse(p):
    """Inverse of :func:`q_function` by bracketed root finding."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim == 0:
        return _q_inverse_scalar(float(arr))
    return np.array([_q_inverse_scalar(float(v)) for v in arr.ravel()]).reshape(arr.shape)


def np_threshold(alpha: float, xc_norm: float, sigma: float) -> float:
    """gamma with P(d > gamma | E0) = alpha, since d ~ N(0, sigma^2 ||Xc||^2) under E0."""
    return sigma * xc_norm * q_inverse(alpha)


def detection_statistic(y, X: ToeplitzOperator, c) -> float:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    xc = apply(X, c)
    if y.shape[0] != xc.shape[0]:
        raise ValueError(f"measurement length {y.shape[0]} != operator rows {xc.shape[0]}")
    return float(np.dot(y, xc))


def analytic_pd(alpha, xc_norm: float, sigma: float):
    a = np.asarray(alpha, dtype=np.float64)
    if np.any(~(a > 0)) or np.any(~(a < 1)):
        raise ValueError("alpha must lie in (0, 1)")
    if xc_norm < 0:
        raise ValueError("xc_norm must be non-negative")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return q_function(q_inverse(a) - xc_norm / sigma)


@dataclass(frozen=True)
class DetectionProblem:
    c: np.ndarray
    sigma: float
    m: int

    def __post_init__(self):
        c = np.array(self.c, dtype=np.float64).reshape(-1)
        if not np.linalg.norm(c) > 0:
            raise ValueError("change signal c must be nonzero")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.m < 1:
            raise ValueError("m must be positive")
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.shape[0]


@dataclass
class RocCurve:
    alphas: np.ndarray
    pds: np.ndarray
    kind: str
    meta: dict = field(default_factory=dict)


def default_alphas(steps: int = 99) -> np.ndarray:
    if steps < 1:
        raise ValueError("need at least one alpha")
    return np.arange(1, steps + 1) / (steps + 1)


def analytic_roc(alphas, xc_norm: float, sigma: float) -> RocCurve:
    alphas = np.asarray(alphas, dtype=np.float64)
    return RocCurve(alphas, analytic_pd(alphas, xc_norm, sigma), "analytic",
                    {"xc_norm": xc_norm, "sigma": sigma})


def measured_norms(problem: DetectionProblem, trials: int, seed: int,
                   ensemble: str = "toeplitz") -> np.ndarray:
    """||X_t c|| for ``trials`` draws of X with i.i.d. N(0, 1/M) entries."""
    if ensemble not in ENSEMBLES:
        raise ValueError(f"ensemble must be one of {ENSEMBLES}")
    m, n, c = problem.m, problem.n, problem.c
    sd = 1.0 / math.sqrt(m)
    tag = ENSEMBLES.index(ensemble)

    def chunk(start, stop):
        if ensemble == "toeplitz":
            gens = np.empty((stop - start, n + m - 1))
            for i, t in enumerate(range(start, stop)):
                gens[i] = trial_rng(seed, t, STREAM_ROC, tag).standard_normal(n + m - 1)
            y = apply_batch(gens * sd, c)
        else:
            y = np.empty((stop - start, m))
            for i, t in enumerate(range(start, stop)):
                X = trial_rng(seed, t, STREAM_ROC, tag).standard_normal((m, n)) * sd
                y[i] = X @ c
        return np.sqrt(np.einsum("ij,ij->i", y, y))

    return np.concatenate(map_trials(chunk, trials, chunk=64))


def empirical_roc(problem: DetectionProblem, trials: int, alphas=None, seed: int = 0,
                  ensemble: str = "toeplitz") -> tuple[list[RocCurve], RocCurve]:
    """Per-trial analytic ROCs for random X, plus their pointwise mean."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    alphas = default_alphas() if alphas is None else np.asarray(alphas, dtype=np.float64)
    norms = measured_norms(problem, trials, seed, ensemble)
    qa = q_inverse(alphas)
    pds = q_function(qa[None, :] - norms[:, None] / problem.sigma)
    pds = np.atleast_2d(pds)
    curves = [
        RocCurve(alphas, pds[t], "empirical_single",
                 {"xc_norm": float(norms[t]), "trial": t, "seed": seed, "ensemble": ensemble})
        for t in range(trials)
    ]
    mean = RocCurve(alphas, pds.mean(axis=0), "empirical_mean",
                    {"trials": trials, "seed": seed, "ensemble": ensemble,
                     "std": pds.std(axis=0, ddof=1) if trials > 1 else np.zeros_like(alphas)})
    return curves, mean


def simulate_np_test(X: ToeplitzOperator, c, sigma: float, alpha: float, draws: int,
                     rng: np.random.Generator) -> tuple[float, float]:
    """Empirical (P_FA, P_D) of the thresholded statistic y^T X c for one fixed X."""
    xc = apply(X, c)
    xc_norm = float(np.linalg.norm(xc))
    gamma = np_threshold(alpha, xc_norm, sigma)
    z0 = rng.standard_normal((draws, X.m)) * sigma
    z1 = rng.standard_normal((draws, X.m)) * sigma
    d0 = z0 @ xc
    d1 = (z1 + xc) @ xc
    return float(np.mean(d0 > gamma)), float(np.mean(d1 > gamma))


def required_measurements(rho: float, epsilon: float, zeta: float) -> int:
    """Smallest M with 2 exp(-eps^2 M / (8 rho)) <= zeta^2."""
    _check_budget_args(rho, epsilon, zeta)
    x = 8.0 * rho / epsilon**2 * math.log(2.0 / zeta**2)
    # absorb rounding when x is an integer in exact arithmetic
    return max(1, int(math.ceil(x * (1.0 - 1e-12))))


def required_measurements_loose(rho: float, epsilon: float, zeta: float) -> float:
    """The cruder estimate (16 rho / eps^2) ln(1/zeta), without the factor 2 in the tail."""
    _check_budget_args(rho, epsilon, zeta)
    return 16.0 * rho / epsilon**2 * math.log(1.0 / zeta)


def _check_budget_args(rho, epsilon, zeta):
    if not rho > 0:
        raise ValueError("rho must be positive")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 0 < zeta < 1:
        raise ValueError("zeta must lie in (0, 1)")
