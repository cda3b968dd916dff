import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toepcom.analysis import covariance_matrix, fourier_coherence_sq
from toepcom.bounds import (
    DomainError,
    TailBoundQuery,
    circulant_eigenvalue_tail,
    gaussian_quadratic_mgf,
    hoeffding_complex_tail,
    squared_gaussian_lower_tail,
    tail_bound,
    toeplitz_lower_tail,
    toeplitz_upper_tail,
    unstructured_tail,
)
from toepcom.signals import Orthobasis
from toepcom.toeplitz import circulant_eigenvalues, draw_toeplitz

from conftest import mc_se


class TestTailBounds:
    def test_upper_example(self):
        assert toeplitz_upper_tail(0.5, 512, 63.26) == pytest.approx(0.7765, abs=1e-4)

    def test_lower_example(self):
        assert toeplitz_lower_tail(0.5, 32, 1.0) == pytest.approx(np.exp(-1), rel=1e-12)

    def test_unstructured_example(self):
        assert unstructured_tail(0.5, 16) == pytest.approx(0.735759, abs=1e-6)

    def test_unstructured_clamped(self):
        assert unstructured_tail(0.01, 1) == 1.0
        assert unstructured_tail(0.01, 1, raw=True) > 1.0

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.2, 1.5, float("nan")])
    def test_epsilon_domain(self, eps):
        with pytest.raises(DomainError):
            toeplitz_upper_tail(eps, 10, 1.0)

    def test_rho_domain(self):
        with pytest.raises(DomainError):
            toeplitz_upper_tail(0.5, 10, 0.0)
        with pytest.raises(DomainError):
            toeplitz_lower_tail(0.5, 0, 1.0)

    def test_array_input(self):
        eps = np.array([0.1, 0.5, 0.9])
        out = toeplitz_upper_tail(eps, 100, 2.0)
        np.testing.assert_allclose(out, np.exp(-(eps**2) * 100 / 16))

    def test_query_dispatch(self):
        q = TailBoundQuery(0.5, 512, 63.26)
        assert tail_bound(q) == toeplitz_upper_tail(0.5, 512, 63.26)
        assert tail_bound(q, "lower") == toeplitz_lower_tail(0.5, 512, 63.26)
        with pytest.raises(ValueError):
            tail_bound(q, "middle")
        with pytest.raises(DomainError):
            TailBoundQuery(1.2, 5, 1.0)

    @settings(max_examples=100, deadline=None)
    @given(e1=st.floats(0.01, 0.99), e2=st.floats(0.01, 0.99), m=st.integers(1, 5000),
           f=st.floats(1.0, 500.0))
    def test_monotone(self, e1, e2, m, f):
        lo, hi = sorted((e1, e2))
        assert toeplitz_upper_tail(hi, m, f) <= toeplitz_upper_tail(lo, m, f)
        assert toeplitz_lower_tail(hi, m, f) <= toeplitz_lower_tail(lo, m, f)
        assert toeplitz_upper_tail(lo, m, f) <= toeplitz_upper_tail(lo, m, f * 1.5)
        assert toeplitz_upper_tail(lo, m + 1, f) <= toeplitz_upper_tail(lo, m, f)

    @settings(max_examples=50, deadline=None)
    @given(eps=st.floats(0.01, 0.99), m=st.integers(1, 5000), rho=st.floats(1.0, 500.0))
    def test_larger_rho_never_tighter(self, eps, m, rho):
        # rho >= 1 makes the Toeplitz exponent no better than M/8 per unit eps^2
        assert toeplitz_upper_tail(eps, m, rho, raw=True) >= np.exp(-(eps**2) * m / 8) * (1 - 1e-12)


class TestMgf:
    def test_scalar_example(self):
        assert gaussian_quadratic_mgf(np.array([[1.0]]), 0.25) == pytest.approx(np.sqrt(2), rel=1e-12)

    def test_t_zero(self, rng):
        a = rng.standard_normal(10)
        assert gaussian_quadratic_mgf(covariance_matrix(a, 5), 0.0) == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            gaussian_quadratic_mgf(np.eye(3), 0.5)
        with pytest.raises(DomainError):
            gaussian_quadratic_mgf(np.eye(3), 0.7)

    def test_covariance_object_matches_dense(self, rng):
        a = rng.standard_normal(12)
        P = covariance_matrix(a, 6)
        t = 0.1 / np.linalg.eigvalsh(P.to_dense()).max()
        assert gaussian_quadratic_mgf(P, t) == pytest.approx(gaussian_quadratic_mgf(P.to_dense(), t), rel=1e-12)

    def test_diagonal_closed_form(self):
        lam = np.array([0.5, 1.0, 2.0])
        t = 0.2
        assert gaussian_quadratic_mgf(np.diag(lam), t) == pytest.approx(np.prod(1 - 2 * t * lam) ** -0.5)

    def test_monte_carlo(self, rng):
        a = np.array([1.0, -0.5, 0.25])
        P = covariance_matrix(a, 3).to_dense()
        t = 0.2 / np.linalg.eigvalsh(P).max()
        y = rng.multivariate_normal(np.zeros(3), P, size=200_000)
        vals = np.exp(t * np.einsum("ij,ij->i", y, y))
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - gaussian_quadratic_mgf(P, t)) <= 4 * se


class TestSquaredGaussian:
    def test_example(self):
        assert squared_gaussian_lower_tail(4, 1.0, 1.0) == pytest.approx(np.exp(-1))

    def test_empirical(self, rng):
        k, sigma_sq, trials = 16, 0.7, 200_000
        q = rng.standard_normal((trials, k)) * np.sqrt(sigma_sq)
        s = np.einsum("ij,ij->i", q, q)
        for eps in (0.2, 0.5, 0.8):
            rate = np.mean(s <= k * sigma_sq * (1 - eps))
            assert rate <= squared_gaussian_lower_tail(k, sigma_sq, eps) + 3 * mc_se(rate, trials)

    def test_domain(self):
        with pytest.raises(DomainError):
            squared_gaussian_lower_tail(0, 1.0, 0.5)
        with pytest.raises(DomainError):
            squared_gaussian_lower_tail(3, 1.0, 0.0)


class TestHoeffding:
    def test_complex_example(self):
        assert hoeffding_complex_tail(1.0, 1.0, 2.0) == pytest.approx(0.735759, abs=1e-6)

    def test_real_example(self):
        assert hoeffding_complex_tail(1.0, 1.0, 2.0, real=True) == pytest.approx(0.135335, abs=1e-6)

    def test_clamp(self):
        assert hoeffding_complex_tail(1.0, 1.0, 0.1) == 1.0
        assert hoeffding_complex_tail(1.0, 1.0, 0.1, raw=True) > 1.0

    def test_empirical_complex(self, rng):
        b = np.exp(2j * np.pi * rng.random(8)) * rng.random(8)
        sigma, trials = 1.3, 100_000
        e = rng.standard_normal((trials, 8)) * sigma
        s = np.abs(e @ b)
        bn = float(np.sum(np.abs(b) ** 2))
        for u in (1.0, 2.0, 3.0):
            u_abs = u * sigma * np.sqrt(bn)
            rate = np.mean(s >= u_abs)
            assert rate <= hoeffding_complex_tail(bn, sigma**2, u_abs) + 3 * mc_se(rate, trials)


class TestCirculantTail:
    def test_clamp(self):
        assert circulant_eigenvalue_tail(1, 10, 1.0, 0.0) == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            circulant_eigenvalue_tail(1, 10, 0.0, 1.0)
        with pytest.raises(DomainError):
            circulant_eigenvalue_tail(1, 10, 1.0, -1.0)

    def test_empirical_identity(self, rng):
        n, k, m, trials = 32, 4, 16, 20_000
        L = n + m - 1
        nu_sq = fourier_coherence_sq(Orthobasis.identity(n), k, m)
        A = np.zeros((trials, n))
        for t in range(trials):
            A[t, rng.choice(n, k, replace=False)] = rng.standard_normal(k) / np.sqrt(k)
        lam = np.abs(np.fft.fft(A, L, axis=1))
        # a single fixed eigenvalue index, plus a spot check of the helper
        assert circulant_eigenvalues(A[0], m).lambda_abs[5] == pytest.approx(lam[0, 5])
        lam_i = lam[:, 5]
        for u in (1.5, 2.0, 2.5):
            rate = np.mean(lam_i >= u)
            assert rate <= circulant_eigenvalue_tail(k, L, nu_sq, u) + 3 * mc_se(rate, trials)


def test_empirical_toeplitz_upper_tail(rng):
    a = np.zeros(64)
    a[:8] = 1 / np.sqrt(8)
    m, trials = 64, 4000
    P = covariance_matrix(a, m)
    rho = np.linalg.eigvalsh(P.to_dense()).max()
    y = np.array([draw_toeplitz(m, 64, 1.0, rng) @ a for _ in range(trials)])
    s = np.einsum("ij,ij->i", y, y)
    for eps in (0.3, 0.6, 0.9):
        rate = np.mean(s - m >= eps * m)
        assert rate <= toeplitz_upper_tail(eps, m, rho) + 3 * mc_se(rate, trials)
