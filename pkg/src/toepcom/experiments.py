"""Seeded Monte Carlo experiments: empirical concentration rates, sample means
of rho / rho_c over random sparse signals, and the linear fit of K / mean(rho_c).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from ._parallel import map_trials, trial_rng
from .analysis import expected_rho_bound, rho_and_rho_c_batch
from .signals import SignalSpec, draw_sparse_coefficients, make_basis
from .toeplitz import apply_batch

# stream tags keep the different experiments' random numbers disjoint
STREAM_CONCENTRATION = 1
STREAM_SWEEP = 2

DEFAULT_EPS = np.linspace(0.02, 0.98, 50)
AXES = ("K", "M", "N")


def default_eps_grid(eps_min=0.02, eps_max=0.98, steps=50) -> np.ndarray:
    if not 0 < eps_min <= eps_max < 1:
        raise ValueError("need 0 < eps_min <= eps_max < 1")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    return np.linspace(eps_min, eps_max, steps)


def signal_digest(a) -> str:
    v = np.ascontiguousarray(a, dtype=np.float64)
    return hashlib.sha256(v.tobytes()).hexdigest()[:16]


@dataclass
class ConcentrationResult:
    epsilons: np.ndarray
    upper_rates: np.ndarray
    lower_rates: np.ndarray
    upper_counts: np.ndarray
    lower_counts: np.ndarray
    trials: int
    m: int
    n: int
    signal_digest: str
    seed: int
    sq_norms: np.ndarray = field(repr=False)

    def std_errors(self, rates: np.ndarray) -> np.ndarray:
        return np.sqrt(rates * (1.0 - rates) / self.trials)


def measurement_energies(a, m: int, trials: int, seed: int, variance: float = 1.0) -> np.ndarray:
    """||X_t a||^2 for ``trials`` independent Gaussian Toeplitz operators X_t."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    length = a.shape[0] + m - 1
    sd = np.sqrt(variance)

    def chunk(start, stop):
        gens = np.empty((stop - start, length))
        for i, t in enumerate(range(start, stop)):
            gens[i] = trial_rng(seed, t, STREAM_CONCENTRATION).standard_normal(length)
        y = apply_batch(gens * sd, a)
        return np.einsum("ij,ij->i", y, y)

    return np.concatenate(map_trials(chunk, trials))


def run_concentration(a, m: int, trials: int = 1000, eps_grid=None, seed: int = 0,
                      variance: float = 1.0) -> ConcentrationResult:
    """Empirical rates of the upper and lower deviation events of ||X a||^2.

    The events are ||y||^2 - E >= eps E and ||y||^2 - E <= -eps E with
    E = variance * M * ||a||^2.
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    eps = DEFAULT_EPS if eps_grid is None else np.asarray(eps_grid, dtype=np.float64).reshape(-1)
    if eps.size == 0:
        raise ValueError("empty epsilon grid")
    if np.any(eps <= 0) or np.any(eps >= 1):
        raise ValueError("epsilon grid must lie in (0, 1)")
    if m < 1:
        raise ValueError("m must be positive")

    sq = measurement_energies(a, m, trials, seed, variance)
    center = variance * m * float(np.dot(a, a))
    srt = np.sort(sq)
    upper = trials - np.searchsorted(srt, center * (1.0 + eps), side="left")
    lower = np.searchsorted(srt, center * (1.0 - eps), side="right")
    return ConcentrationResult(
        epsilons=eps,
        upper_rates=upper / trials,
        lower_rates=lower / trials,
        upper_counts=upper,
        lower_counts=lower,
        trials=trials,
        m=m,
        n=a.shape[0],
        signal_digest=signal_digest(a),
        seed=seed,
        sq_norms=sq,
    )


@dataclass
class SweepResult:
    axis: str
    points: np.ndarray
    mean_rho: np.ndarray
    mean_rho_c: np.ndarray
    trials: int
    basis: str
    seed: int
    n: np.ndarray
    k: np.ndarray
    m: np.ndarray
    bound_expectation: np.ndarray


@lru_cache(maxsize=8)
def _basis(kind: str, n: int):
    return make_basis(kind, n)


def _grid_point(template: SignalSpec, axis: str, p: int, m: Optional[int], full_support: bool):
    n, k, mm = template.n, template.k, m
    if axis == "K":
        k = p
    elif axis == "N":
        n = p
    else:
        mm = p
    if full_support:
        k = n
    if mm is None or mm < 1:
        raise ValueError("a positive measurement count is required")
    if not 1 <= k <= n:
        raise ValueError(f"grid point violates 1 <= K <= N (K={k}, N={n})")
    return n, k, mm


def sample_functionals(spec: SignalSpec, m: int, trials: int, seed: int, tag: int = 0):
    """rho and rho_c for ``trials`` random signals drawn per ``spec``."""
    basis = _basis(spec.basis, spec.n)

    def chunk(start, stop):
        S = np.empty((stop - start, spec.n))
        for i, t in enumerate(range(start, stop)):
            q = draw_sparse_coefficients(spec, trial_rng(seed, t, STREAM_SWEEP, tag))
            if basis.kind == "identity":
                S[i] = q.dense()
            else:
                S[i] = basis.columns(q.support) @ q.nonzeros
        return rho_and_rho_c_batch(S, m)

    parts = map_trials(chunk, trials)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def sweep_mean_rho(template: SignalSpec, axis: str, points, trials: int = 1000,
                   m: Optional[int] = None, seed: int = 0,
                   full_support: bool = False) -> SweepResult:
    """Sample means of rho and rho_c along one of the K, M or N axes.

    ``m`` is the fixed measurement count for K and N sweeps. The template
    supplies the basis, the fixed N or K, and the support/value rules.
    ``full_support`` sets K = N at every point.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}")
    pts = np.asarray(points, dtype=np.int64).reshape(-1)
    if pts.size == 0:
        raise ValueError("empty grid")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    geometry = [_grid_point(template, axis, int(p), m, full_support) for p in pts]
    mean_rho, mean_rho_c, bounds = [], [], []
    for g, (n, k, mm) in enumerate(geometry):
        spec = template.replace(n=n, k=k, seed=seed)
        rho, rho_c = sample_functionals(spec, mm, trials, seed, tag=g)
        mean_rho.append(np.mean(rho))
        mean_rho_c.append(np.mean(rho_c))
        bounds.append(expected_rho_bound(_basis(spec.basis, n), k, mm))
    geo = np.array(geometry)
    return SweepResult(
        axis=axis,
        points=pts,
        mean_rho=np.array(mean_rho),
        mean_rho_c=np.array(mean_rho_c),
        trials=trials,
        basis=template.basis,
        seed=seed,
        n=geo[:, 0],
        k=geo[:, 1],
        m=geo[:, 2],
        bound_expectation=np.array(bounds),
    )


@dataclass
class ConjectureFit:
    c1: float
    c2: float
    residual: float
    implied_c: float
    l: int  # noqa: E741

    def line(self, k):
        return self.c1 * np.asarray(k, dtype=np.float64) + self.c2


def fit_conjecture(sweep: SweepResult) -> ConjectureFit:
    """Least-squares line through (K, K / mean rho_c)."""
    if sweep.axis != "K":
        raise ValueError("conjecture fit needs a sweep over K")
    x = np.asarray(sweep.points, dtype=np.float64)
    rc = np.asarray(sweep.mean_rho_c, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two grid points")
    if np.ptp(x) == 0:
        raise ValueError("degenerate abscissae: all K values are equal")
    if np.any(rc <= 0):
        raise ValueError("mean rho_c must be positive")
    if np.ptp(sweep.n) or np.ptp(sweep.m):
        raise ValueError("N and M must be fixed along a K sweep")
    y = x / rc
    c1, c2 = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (c1 * x + c2)) ** 2)))
    l = int(sweep.n[0] + sweep.m[0] - 1)  # noqa: E741
    implied = 1.0 / (c1 * np.log(l)) if c1 != 0 else float("inf")
    return ConjectureFit(float(c1), float(c2), resid, float(implied), l)
