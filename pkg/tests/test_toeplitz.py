import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toepcom.analysis import covariance_matrix
from toepcom.toeplitz import (
    DimensionError,
    ToeplitzOperator,
    apply,
    apply_batch,
    circulant_eigenvalues,
    draw_toeplitz,
    embedding_matrix,
)


def dense_from_layout(gen, m, n):
    """Row i, column j (1-based) holds x_{N+i-j}; written out entry by entry."""
    X = np.empty((m, n))
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            X[i - 1, j - 1] = gen[n + i - j - 1]
    return X


class TestDraw:
    def test_lengths(self, rng):
        assert draw_toeplitz(1, 1, rng=rng).gen.shape == (1,)
        assert draw_toeplitz(128, 256, rng=rng).gen.shape == (383,)

    def test_variance(self):
        X = draw_toeplitz(50_000, 50_001, variance=1.0, rng=np.random.default_rng(7))
        assert 0.98 <= np.var(X.gen) <= 1.02

    def test_bad_variance(self, rng):
        with pytest.raises(ValueError):
            draw_toeplitz(2, 2, variance=0.0, rng=rng)

    def test_deterministic(self):
        a = draw_toeplitz(5, 7, rng=np.random.default_rng(11)).gen
        b = draw_toeplitz(5, 7, rng=np.random.default_rng(11)).gen
        assert a.tobytes() == b.tobytes()

    def test_bad_length(self):
        with pytest.raises(DimensionError):
            ToeplitzOperator(np.zeros(4), 2, 2)


class TestApply:
    def test_first_column(self):
        gen = np.array([10.0, 20.0, 30.0, 40.0])
        X = ToeplitzOperator(gen, 2, 3)
        np.testing.assert_allclose(apply(X, [1.0, 0.0, 0.0]), [30.0, 40.0])

    def test_ones_2x2(self):
        X = ToeplitzOperator([1.0, 1.0, 1.0], 2, 2)
        np.testing.assert_allclose(X.to_dense(), [[1, 1], [1, 1]])
        np.testing.assert_allclose(apply(X, [1.0, 2.0]), [3.0, 3.0])

    def test_to_dense_layout(self, rng):
        X = draw_toeplitz(6, 9, rng=rng)
        np.testing.assert_array_equal(X.to_dense(), dense_from_layout(X.gen, 6, 9))

    def test_mismatch(self, rng):
        with pytest.raises(DimensionError):
            apply(draw_toeplitz(3, 4, rng=rng), np.ones(5))

    @settings(max_examples=60, deadline=None)
    @given(m=st.integers(1, 64), n=st.integers(1, 64), seed=st.integers(0, 2**31))
    def test_matches_dense(self, m, n, seed):
        rng = np.random.default_rng(seed)
        X = draw_toeplitz(m, n, rng=rng)
        a = rng.standard_normal(n)
        dense = dense_from_layout(X.gen, m, n) @ a
        scale = np.linalg.norm(np.abs(dense_from_layout(X.gen, m, n)) @ np.abs(a))
        assert np.linalg.norm(apply(X, a) - dense) <= 1e-10 * max(scale, 1e-300)
        batch = apply_batch(X.gen[None, :], a)[0]
        assert np.linalg.norm(batch - dense) <= 1e-10 * max(scale, 1e-300)


class TestEmbedding:
    def test_identity_case(self):
        np.testing.assert_array_equal(embedding_matrix([1.0], 2), np.eye(2))

    def test_band_pattern(self):
        np.testing.assert_array_equal(embedding_matrix([1.0, 2.0], 2), [[1, 0], [2, 1], [0, 2]])

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(1, 64), m=st.integers(1, 64), seed=st.integers(0, 2**31))
    def test_gram_is_covariance(self, n, m, seed):
        a = np.random.default_rng(seed).standard_normal(n)
        A = embedding_matrix(a, m)
        G = A.T @ A
        np.testing.assert_allclose(G, G.T)
        P = covariance_matrix(a, m).to_dense()
        assert np.linalg.norm(G - P) < 1e-10 * max(1.0, np.dot(a, a))
        # symmetric Toeplitz: constant along diagonals
        for d in range(m):
            diag = np.diagonal(G, d)
            np.testing.assert_allclose(diag, diag[0], atol=1e-12 * max(1.0, np.dot(a, a)))


class TestCirculant:
    @pytest.mark.parametrize("m", [1, 3, 10])
    def test_impulse(self, m):
        lam = circulant_eigenvalues([1.0, 0.0, 0.0, 0.0], m).lambda_abs
        np.testing.assert_allclose(lam, np.ones(3 + m), atol=1e-15)

    def test_two_point(self):
        lam = circulant_eigenvalues(np.array([1.0, 1.0]) / np.sqrt(2), 1).lambda_abs
        np.testing.assert_allclose(lam, [np.sqrt(2), 0.0], atol=1e-15)

    def test_dc_first(self, rng):
        a = rng.standard_normal(9)
        assert circulant_eigenvalues(a, 4).lambda_abs[0] == pytest.approx(abs(a.sum()))

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(1, 48), m=st.integers(1, 48), seed=st.integers(0, 2**31))
    def test_direct_summation_and_parseval(self, n, m, seed):
        a = np.random.default_rng(seed).standard_normal(n)
        L = n + m - 1
        lam = circulant_eigenvalues(a, m).lambda_abs
        i = np.arange(L)[:, None]
        k = np.arange(n)[None, :]
        direct = np.abs(np.exp(-2j * np.pi * i * k / L) @ a)
        np.testing.assert_allclose(lam, direct, rtol=1e-9, atol=1e-9 * np.abs(a).sum())
        assert np.sum(lam**2) == pytest.approx(L * np.dot(a, a), rel=1e-9)
        A = embedding_matrix(a, m)
        assert lam.max() ** 2 >= np.linalg.eigvalsh(A.T @ A).max() * (1 - 1e-12)
