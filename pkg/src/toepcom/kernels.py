"""Backend selection for the hot numerical kernels.

The compiled extension ``toepcom._ckernels`` is used when it has been built;
otherwise the numpy implementation in ``toepcom._pykernels`` is used. Setting
``TOEPCOM_PURE_PYTHON=1`` forces the fallback.
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("TOEPCOM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"


def available_backends():
    """Return a dict of backend name -> kernel module, for benchmarking."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out


def autocorrelation(a, max_lag):
    a = np.ascontiguousarray(a, dtype=np.float64)
    return _impl.autocorrelation(a, int(max_lag))


def toeplitz_lambda_max(first_row, v0, rtol=1e-12, maxiter=0):
    """Top eigenvalue of a symmetric Toeplitz matrix; returns ``(value, iters)``."""
    r = np.ascontiguousarray(first_row, dtype=np.float64)
    v0 = np.ascontiguousarray(v0, dtype=np.float64)
    return _impl.toeplitz_lambda_max(r, v0, float(rtol), int(maxiter))
