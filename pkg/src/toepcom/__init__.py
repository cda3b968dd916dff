"""Concentration of measure tools for randomized compressive Toeplitz matrices."""

from .analysis import (
    ComProfile,
    CovarianceToeplitz,
    autocorrelation,
    block_signal_rho_lower_bound,
    com_profile,
    conjecture_curve,
    covariance_matrix,
    deterministic_rho_bound,
    expected_rho_bound,
    fourier_coherence,
    rho_and_rho_c,
)
from .kernels import BACKEND
from .signals import (
    DenseSignal,
    Orthobasis,
    SignalSpec,
    SparseCoefficients,
    block_signal,
    build_signal,
    draw_sparse_coefficients,
    normalize,
    real_fourier_basis,
    synthesize,
)
from .toeplitz import (
    CirculantEigens,
    ToeplitzOperator,
    apply,
    circulant_eigenvalues,
    draw_toeplitz,
    embedding_matrix,
)

__version__ = "0.1.0"
