"""Concentration functionals of a signal and closed-form bounds on them.

For a signal ``a`` of length N and M measurements, P(a) is the M x M
symmetric Toeplitz matrix of un-normalized autocorrelations. The functionals

    rho(a)   = lambda_max(P) / ||a||^2
    mu(a)    = sum_i lambda_i(P)^2 / (M ||a||^4)
    rho_c(a) = max_i |DFT_L([a, 0])_i|^2 / ||a||^2,   L = N + M - 1

satisfy mu <= rho <= rho_c and drive the Toeplitz tail bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.linalg

from . import kernels
from .signals import Orthobasis, SignalError
from .toeplitz import circulant_spectrum

NEG_EIG_CLIP = 1e-9
EIG_RESIDUAL_TOL = 1e-8
_BANDED_RATIO = 4


def _as_vector(a) -> np.ndarray:
    v = np.asarray(a, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise SignalError("empty signal")
    return v


def autocorrelation(a, max_lag: int) -> np.ndarray:
    """[R_a(0), ..., R_a(max_lag)] with R_a(tau) = sum_i a_i a_{i+tau}."""
    if max_lag < 0:
        raise ValueError("max_lag must be non-negative")
    return kernels.autocorrelation(_as_vector(a), max_lag)


@dataclass(frozen=True)
class CovarianceToeplitz:
    """P(a), stored as its first row of autocorrelations."""

    first_row: np.ndarray

    @property
    def m(self) -> int:
        return self.first_row.shape[0]

    def to_dense(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.first_row)

    def frobenius_sq(self) -> float:
        r = self.first_row
        w = self.m - np.arange(self.m)
        w[1:] *= 2
        return float(np.dot(w, r * r))

    def bandwidth(self) -> int:
        nz = np.flatnonzero(self.first_row)
        return int(nz[-1]) if nz.size else 0

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues; uses a banded solver when P is narrow-banded."""
        m = self.m
        bw = self.bandwidth()
        if m > 64 and bw * _BANDED_RATIO < m:
            bands = np.zeros((bw + 1, m))
            for d in range(bw + 1):
                bands[bw - d, d:] = self.first_row[d]
            return scipy.linalg.eigvals_banded(bands, lower=False)
        return scipy.linalg.eigvalsh(self.to_dense())


def covariance_matrix(a, m: int) -> CovarianceToeplitz:
    if m < 1:
        raise ValueError("m must be positive")
    return CovarianceToeplitz(autocorrelation(a, m - 1))


@dataclass(frozen=True)
class ComProfile:
    rho: float
    mu: float
    rho_c: float
    eigs_p: np.ndarray
    norm_sq: float
    lambda_abs: np.ndarray

    def as_dict(self) -> dict:
        return {"rho": self.rho, "mu": self.mu, "rho_c": self.rho_c, "norm_sq": self.norm_sq}


def com_profile(a, m: int, debug: bool = False) -> ComProfile:
    """Full spectral profile of P(a): eigenvalues, rho, mu and rho_c.

    With ``debug=True`` the eigen-residuals of a dense solve are checked
    against ``EIG_RESIDUAL_TOL * ||P||_F``.
    """
    v = _as_vector(a)
    norm_sq = float(np.dot(v, v))
    if not norm_sq > 0:
        raise SignalError("functionals are undefined for the zero signal")
    P = covariance_matrix(v, m)
    eigs = P.eigenvalues()
    floor = -NEG_EIG_CLIP * norm_sq
    if eigs[0] < floor:
        raise ArithmeticError(f"P(a) has a significantly negative eigenvalue {eigs[0]:.3g}")
    eigs = np.clip(eigs, 0.0, None)
    if debug:
        Pd = P.to_dense()
        w, V = scipy.linalg.eigh(Pd)
        res = np.linalg.norm(Pd @ V - V * w, axis=0).max()
        assert res <= EIG_RESIDUAL_TOL * np.linalg.norm(Pd), res
    lam = np.abs(circulant_spectrum(v, m))
    return ComProfile(
        rho=float(eigs[-1] / norm_sq),
        mu=P.frobenius_sq() / (m * norm_sq**2),
        rho_c=float(np.max(lam) ** 2 / norm_sq),
        eigs_p=eigs,
        norm_sq=norm_sq,
        lambda_abs=lam,
    )


def mu_from_eigenvalues(eigs, m: int, norm_sq: float) -> float:
    eigs = np.asarray(eigs, dtype=np.float64)
    return float(np.dot(eigs, eigs) / (m * norm_sq**2))


_START_JITTER = np.random.default_rng(0x70E9C0).standard_normal(1 << 16)


def _lanczos_start(peak_bin: int, l: int, m: int) -> np.ndarray:  # noqa: E741
    # a sinusoid at the circulant peak frequency is close to the top
    # eigenvector of P; the jitter keeps every eigendirection reachable
    j = np.arange(m)
    w = 2.0 * np.pi * peak_bin / l
    v = np.cos(w * j) + np.sin(w * j)
    jit = _START_JITTER[:m] if m <= _START_JITTER.shape[0] else np.resize(_START_JITTER, m)
    return v + 1e-2 * jit


def rho_and_rho_c(a, m: int, rtol: float = 1e-12) -> tuple[float, float]:
    """(rho, rho_c) without a full eigendecomposition.

    One length-L FFT gives both the circulant eigenvalues and, through the
    power spectrum, the autocorrelations defining P(a); the top eigenvalue of
    P(a) then comes from the Lanczos kernel.
    """
    rows, rc = rho_and_rho_c_batch(np.atleast_2d(_as_vector(a)), m, rtol)
    return float(rows[0]), float(rc[0])


def rho_and_rho_c_batch(signals, m: int, rtol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    S = np.atleast_2d(np.asarray(signals, dtype=np.float64))
    t, n = S.shape
    l = n + m - 1  # noqa: E741
    norm_sq = np.einsum("ij,ij->i", S, S)
    if np.any(norm_sq <= 0):
        raise SignalError("functionals are undefined for the zero signal")
    spec = scipy.fft.fft(S, l, axis=1)
    power = spec.real**2 + spec.imag**2
    peak = np.argmax(power, axis=1)
    rho_c = power[np.arange(t), peak] / norm_sq
    # circular autocorrelation of length L equals R_a on lags 0..M-1
    acf = scipy.fft.ifft(power, axis=1).real[:, :m]
    if m > n - 1:
        acf[:, n:] = 0.0
    rho = np.empty(t)
    for i in range(t):
        start = _lanczos_start(int(peak[i]), l, m)
        lam, _ = kernels.toeplitz_lambda_max(acf[i], start, rtol)
        rho[i] = lam / norm_sq[i]
    return rho, rho_c


def _coherence_sq_generic(G: np.ndarray, k: int, m: int) -> float:
    n = G.shape[0]
    l = n + m - 1  # noqa: E741
    # entry (i, s) is F_L^{i->}_{1:N} G_s
    C = scipy.fft.fft(G, l, axis=0) / np.sqrt(l)
    mag = C.real**2 + C.imag**2
    if k < n:
        top = np.partition(mag, n - k, axis=1)[:, n - k :]
    else:
        top = mag
    return float(np.max(np.sum(top, axis=1)))


def fourier_coherence_sq(basis: Orthobasis, k: int, m: int, method: str = "auto") -> float:
    n = basis.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 1:
        raise ValueError("m must be positive")
    if method not in ("auto", "generic"):
        raise ValueError(f"unknown method {method!r}")
    l = n + m - 1  # noqa: E741
    if method == "auto" and basis.kind == "identity":
        return k / l
    val = _coherence_sq_generic(basis.as_matrix(), k, m)
    if basis.kind == "real_fourier":
        assert val <= (n / l) * (1 + 1e-10), "real Fourier coherence exceeds sqrt(N/L)"
    return val


def fourier_coherence(basis: Orthobasis, k: int, m: int, method: str = "auto") -> float:
    """K-sparse Fourier coherence nu_K(G) for measurement length ``m``.

    For each Fourier row the best K-subset of columns is the K columns with
    the largest squared correlation, so the maximisation is exact.
    """
    return float(np.sqrt(fourier_coherence_sq(basis, k, m, method)))


def deterministic_rho_bound(basis: Orthobasis, k: int, m: int) -> float:
    """L * nu_K(G)^2, an upper bound on rho over all K-sparse signals in G."""
    l = basis.n + m - 1  # noqa: E741
    return l * fourier_coherence_sq(basis, k, m)


def expected_rho_bound(basis: Orthobasis, k: int, m: int) -> float:
    """(8 L nu_K^2 / K)(ln 2L + 2): bound on E[rho] for Gaussian N(0, 1/K) coefficients."""
    l = basis.n + m - 1  # noqa: E741
    return 8.0 * l * fourier_coherence_sq(basis, k, m) / k * (np.log(2 * l) + 2.0)


def block_signal_rho_lower_bound(k: int, m: int) -> float:
    """Lower bound on rho for a signal with K equal leading entries."""
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive")
    x = k * k / (m + k - 1)
    return k * (1.0 - (np.pi**2 / 24.0) * x * x) ** 2


def conjecture_curve(k, l, c: float):
    """K / (c1 K + c2) with c1 = 1/(c ln L), c2 = 1 - c1.

    No sign restriction on c2: the curve is an empirical fit, not a bound.
    """
    k = np.asarray(k, dtype=np.float64)
    if np.any(k < 1):
        raise ValueError("k must be >= 1")
    if l < 2:
        raise ValueError("l must be >= 2")
    if not c > 0:
        raise ValueError("c must be positive")
    c1 = 1.0 / (c * np.log(l))
    out = k / (c1 * k + (1.0 - c1))
    return float(out) if out.ndim == 0 else out
