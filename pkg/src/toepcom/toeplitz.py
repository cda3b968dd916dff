"""Randomized compressive Toeplitz operators and the circulant embedding.

An M x N operator X is stored as its generating sequence x_1..x_{N+M-1},
laid out so that the first row is (x_N, ..., x_1) and row i, column j holds
x_{N+i-j}. Applying X to a signal is then the "valid" part of the linear
convolution x * a.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.linalg
import scipy.signal


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class ToeplitzOperator:
    gen: np.ndarray
    m: int
    n: int

    def __post_init__(self):
        g = np.array(self.gen, dtype=np.float64).reshape(-1)
        if self.m < 1 or self.n < 1:
            raise DimensionError("m and n must be positive")
        if g.shape[0] != self.m + self.n - 1:
            raise DimensionError(
                f"generating sequence must have length m+n-1={self.m + self.n - 1}, got {g.shape[0]}"
            )
        g.setflags(write=False)
        object.__setattr__(self, "gen", g)

    @property
    def shape(self):
        return (self.m, self.n)

    def to_dense(self) -> np.ndarray:
        """Materialize X (oracle/debug path)."""
        # column j (0-based) is gen[n-1-j : n-1-j+m]; row 0 is gen[n-1::-1]
        return scipy.linalg.toeplitz(self.gen[self.n - 1 :], self.gen[self.n - 1 :: -1])

    def __matmul__(self, a):
        return apply(self, a)


def draw_toeplitz(m: int, n: int, variance: float = 1.0, rng=None) -> ToeplitzOperator:
    if not variance > 0:
        raise ValueError("variance must be positive")
    if m < 1 or n < 1:
        raise DimensionError("m and n must be positive")
    if rng is None:
        rng = np.random.default_rng()
    gen = rng.standard_normal(m + n - 1) * np.sqrt(variance)
    return ToeplitzOperator(gen, m, n)


def apply(X: ToeplitzOperator, a) -> np.ndarray:
    """y = X a via the valid part of a linear convolution."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    if a.shape[0] != X.n:
        raise DimensionError(f"signal length {a.shape[0]} != operator columns {X.n}")
    return scipy.signal.convolve(X.gen, a, mode="valid")


def apply_batch(gens: np.ndarray, a) -> np.ndarray:
    """Apply a stack of operators (rows of ``gens``, each of length m+n-1) to ``a``.

    Returns an array of shape (trials, m).
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    gens = np.atleast_2d(np.asarray(gens, dtype=np.float64))
    n = a.shape[0]
    length = gens.shape[1]
    m = length - n + 1
    if m < 1:
        raise DimensionError("generating sequences are shorter than the signal")
    # circular convolution of length >= L has no aliasing on the valid window
    nfft = scipy.fft.next_fast_len(length, real=True)
    fa = scipy.fft.rfft(a, nfft)
    fx = scipy.fft.rfft(gens, nfft, axis=1)
    full = scipy.fft.irfft(fx * fa, nfft, axis=1)
    return full[:, n - 1 : n - 1 + m]


def embedding_matrix(a, m: int) -> np.ndarray:
    """(N+M-1) x M Toeplitz matrix A whose column j is ``a`` shifted down by j."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    if m < 1:
        raise DimensionError("m must be positive")
    n = a.shape[0]
    col = np.concatenate([a, np.zeros(m - 1)])
    row = np.zeros(m)
    row[0] = a[0]
    assert col.shape[0] == n + m - 1
    return scipy.linalg.toeplitz(col, row)


@dataclass(frozen=True)
class CirculantEigens:
    """|lambda_i(A_c^T)|, i = 1..L, ordered as DFT bins (index 0 is the DC term)."""

    lambda_abs: np.ndarray

    @property
    def l(self) -> int:  # noqa: E743
        return self.lambda_abs.shape[0]


def circulant_spectrum(a, m: int) -> np.ndarray:
    """Complex eigenvalues of A_c^T: the un-normalized length-L DFT of [a, 0_{M-1}]."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    if m < 1:
        raise DimensionError("m must be positive")
    return scipy.fft.fft(a, a.shape[0] + m - 1)


def circulant_eigenvalues(a, m: int) -> CirculantEigens:
    return CirculantEigens(np.abs(circulant_spectrum(a, m)))
