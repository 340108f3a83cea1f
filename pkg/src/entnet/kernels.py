"""Kernel selection: compiled extension when available, NumPy otherwise.

Set ENTNET_PURE_PYTHON=1 to force the NumPy path (used by the parity tests
and the kernel benchmark).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("ENTNET_PURE_PYTHON") == "1":
    _impl = _kernels_py
    USING_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        USING_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        USING_COMPILED = False


def coincidence_tensor(prob4: np.ndarray, wa: np.ndarray, wb: np.ndarray) -> np.ndarray:
    """Joint outcome probabilities of diagonal POVMs on a four-mode state.

    See `_kernels_py.coincidence_tensor` for the contraction definition.
    """
    prob4 = np.ascontiguousarray(prob4, dtype=np.float64)
    wa = np.ascontiguousarray(wa, dtype=np.float64)
    wb = np.ascontiguousarray(wb, dtype=np.float64)
    if prob4.ndim != 4 or len(set(prob4.shape)) != 1:
        raise ValueError(f"prob4 must be (d, d, d, d), got shape {prob4.shape}")
    d = prob4.shape[0]
    if wa.ndim != 2 or wa.shape[1] != d or wb.ndim != 2 or wb.shape[1] != d:
        raise ValueError(
            f"weights must be (k, {d}), got {wa.shape} and {wb.shape}"
        )
    return np.asarray(_impl.coincidence_tensor(prob4, wa, wb))
