"""Test-signal construction: orthobases, sparse coefficient draws, synthesis.

Supports are 1-based throughout the public interface, so that a support
``{1, ..., K}`` means "the first K entries".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

BASIS_KINDS = ("identity", "real_fourier", "explicit")
SUPPORT_RULES = ("first_k", "random")
VALUE_RULES = ("equal_positive", "gaussian_inv_k")

ORTHO_TOL = 1e-10
_UINT64_MAX = 2**64 - 1


class SignalError(ValueError):
    """Invalid signal, basis or signal recipe."""


class UnsupportedBasisError(SignalError):
    """Requested basis construction is not defined (e.g. odd-length real Fourier)."""


@dataclass(frozen=True)
class DenseSignal:
    """A fixed real signal ``a`` of length ``n``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if v.size == 0:
            raise SignalError("signal must have at least one entry")
        if not np.all(np.isfinite(v)):
            raise SignalError("signal entries must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class SparseCoefficients:
    """K-sparse coefficient vector stored as (1-based support, nonzeros)."""

    n: int
    support: np.ndarray
    nonzeros: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=np.int64).reshape(-1)
        v = np.asarray(self.nonzeros, dtype=np.float64).reshape(-1)
        k = s.shape[0]
        if not 1 <= k <= self.n:
            raise SignalError(f"need 1 <= K <= n, got K={k}, n={self.n}")
        if v.shape[0] != k:
            raise SignalError("support and nonzeros must have the same length")
        if s.min() < 1 or s.max() > self.n:
            raise SignalError("support indices must lie in 1..n")
        if np.any(np.diff(s) <= 0):
            raise SignalError("support must be strictly increasing")
        s.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "nonzeros", v)

    @property
    def k(self) -> int:
        return self.support.shape[0]

    def dense(self) -> np.ndarray:
        q = np.zeros(self.n)
        q[self.support - 1] = self.nonzeros
        return q


@dataclass(frozen=True)
class Orthobasis:
    """An N x N real orthobasis. ``matrix`` is None for the identity."""

    kind: str
    n: int
    matrix: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise SignalError(f"unknown basis kind {self.kind!r}")
        if self.n < 1:
            raise SignalError("basis dimension must be positive")
        if self.kind == "identity":
            if self.matrix is not None:
                raise SignalError("identity basis carries no matrix")
            return
        if self.matrix is None:
            raise SignalError(f"{self.kind} basis requires a matrix")
        G = np.array(self.matrix, dtype=np.float64)
        if G.shape != (self.n, self.n):
            raise SignalError(f"basis matrix must be {self.n}x{self.n}")
        err = np.linalg.norm(G.T @ G - np.eye(self.n))
        if err > ORTHO_TOL:
            raise SignalError(f"matrix is not orthonormal (||G^T G - I||_F = {err:.3g})")
        G.setflags(write=False)
        object.__setattr__(self, "matrix", G)

    @classmethod
    def identity(cls, n: int) -> "Orthobasis":
        return cls("identity", n)

    @classmethod
    def explicit(cls, matrix) -> "Orthobasis":
        G = np.asarray(matrix, dtype=np.float64)
        return cls("explicit", G.shape[0], G)

    def as_matrix(self) -> np.ndarray:
        if self.kind == "identity":
            return np.eye(self.n)
        return self.matrix

    def columns(self, support) -> np.ndarray:
        """Columns indexed by a 1-based support, as an N x K matrix."""
        idx = np.asarray(support, dtype=np.int64) - 1
        if self.kind == "identity":
            out = np.zeros((self.n, idx.shape[0]))
            out[idx, np.arange(idx.shape[0])] = 1.0
            return out
        return self.matrix[:, idx]


def real_fourier_basis(n: int) -> Orthobasis:
    """Real-valued Fourier orthobasis R_N for even ``n``.

    Column 1 is the DC column of the unitary DFT F_N, columns 2..N/2 are the
    real parts of sqrt(2) times DFT columns 2..N/2, columns N/2+1..N-1 the
    corresponding imaginary parts, and column N is the Nyquist column.
    """
    if n < 2:
        raise SignalError("real Fourier basis needs n >= 2")
    if n % 2:
        raise UnsupportedBasisError("real Fourier basis is only constructed for even n")
    h = n // 2
    ell = np.arange(n)[:, None]
    cols = np.arange(n)[None, :]
    F = np.exp(-2j * np.pi * ell * cols / n) / np.sqrt(n)
    R = np.empty((n, n))
    R[:, 0] = F[:, 0].real
    R[:, 1:h] = np.sqrt(2) * F[:, 1:h].real
    R[:, h : n - 1] = np.sqrt(2) * F[:, 1:h].imag
    R[:, n - 1] = F[:, h].real
    return Orthobasis("real_fourier", n, R)


def make_basis(kind: str, n: int) -> Orthobasis:
    if kind == "identity":
        return Orthobasis.identity(n)
    if kind == "real_fourier":
        return real_fourier_basis(n)
    raise SignalError(f"basis kind {kind!r} cannot be built from a name")


@dataclass(frozen=True)
class SignalSpec:
    """Declarative recipe for a test signal."""

    n: int
    k: int
    basis: str = "identity"
    support: str = "first_k"
    values: str = "equal_positive"
    seed: Optional[int] = None
    normalize: bool = False

    def __post_init__(self):
        for name in ("n", "k"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise SignalError(f"{name} must be an integer")
        if self.n < 1:
            raise SignalError("n must be positive")
        if not 1 <= self.k <= self.n:
            raise SignalError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.basis not in ("identity", "real_fourier"):
            raise SignalError(f"unknown basis {self.basis!r}")
        if self.support not in SUPPORT_RULES:
            raise SignalError(f"unknown support rule {self.support!r}")
        if self.values not in VALUE_RULES:
            raise SignalError(f"unknown value rule {self.values!r}")
        if self.seed is not None and not 0 <= int(self.seed) <= _UINT64_MAX:
            raise SignalError("seed must be an unsigned 64-bit integer")
        if self.is_random and self.seed is None:
            raise SignalError("a seed is required when any rule is random")
        if self.basis == "real_fourier" and self.n % 2:
            raise UnsupportedBasisError("real Fourier basis is only constructed for even n")

    @property
    def is_random(self) -> bool:
        return self.support == "random" or self.values == "gaussian_inv_k"

    def replace(self, **changes) -> "SignalSpec":
        d = self.to_dict()
        d.update(changes)
        return SignalSpec.from_dict(d)

    def to_dict(self) -> dict:
        return {
            "n": int(self.n),
            "k": int(self.k),
            "basis": self.basis,
            "support": self.support,
            "values": self.values,
            "seed": None if self.seed is None else int(self.seed),
            "normalize": bool(self.normalize),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SignalSpec":
        allowed = {"n", "k", "basis", "support", "values", "seed", "normalize"}
        extra = set(d) - allowed
        if extra:
            raise SignalError(f"unknown SignalSpec fields: {sorted(extra)}")
        missing = {"n", "k"} - set(d)
        if missing:
            raise SignalError(f"missing SignalSpec fields: {sorted(missing)}")
        if "normalize" in d and not isinstance(d["normalize"], bool):
            raise SignalError("normalize must be a boolean")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SignalSpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SignalError(f"invalid SignalSpec JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise SignalError("SignalSpec JSON must be an object")
        return cls.from_dict(d)


def spec_rng(spec: SignalSpec) -> np.random.Generator:
    """Generator seeded from the spec's seed (seed 0 if the spec is deterministic)."""
    return np.random.default_rng(0 if spec.seed is None else int(spec.seed))


def draw_sparse_coefficients(spec: SignalSpec, rng: np.random.Generator) -> SparseCoefficients:
    n, k = spec.n, spec.k
    if spec.support == "first_k":
        support = np.arange(1, k + 1)
    else:
        support = np.sort(rng.choice(n, size=k, replace=False)) + 1
    if spec.values == "equal_positive":
        vals = np.full(k, 1.0 / np.sqrt(k))
    else:
        vals = rng.standard_normal(k) / np.sqrt(k)
    return SparseCoefficients(n, support, vals)


def synthesize(coeffs: SparseCoefficients, basis: Orthobasis) -> DenseSignal:
    """a = G q."""
    if basis.n != coeffs.n:
        raise SignalError(f"basis dimension {basis.n} != coefficient dimension {coeffs.n}")
    if basis.kind == "identity":
        return DenseSignal(coeffs.dense())
    return DenseSignal(basis.columns(coeffs.support) @ coeffs.nonzeros)


def normalize(a) -> DenseSignal:
    v = np.asarray(a, dtype=np.float64)
    nrm = np.linalg.norm(v)
    if not nrm > 0:
        raise SignalError("cannot normalize a zero signal")
    return DenseSignal(v / nrm)


def build_signal(spec: SignalSpec, rng: Optional[np.random.Generator] = None) -> DenseSignal:
    """Draw coefficients, synthesize in the spec's basis, optionally normalize."""
    if rng is None:
        rng = spec_rng(spec)
    coeffs = draw_sparse_coefficients(spec, rng)
    a = synthesize(coeffs, make_basis(spec.basis, spec.n))
    return normalize(a) if spec.normalize else a


def block_signal(n: int, k: int) -> DenseSignal:
    """Unit-norm signal whose first ``k`` entries are equal and the rest zero."""
    return build_signal(SignalSpec(n, k, "identity", "first_k", "equal_positive"))
