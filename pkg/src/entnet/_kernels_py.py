"""Pure-NumPy implementation of the coincidence-tensor kernel.

Kept in lockstep with the Cython version in `_kernels.pyx`; the staged
contraction order is identical so the two agree to rounding.
"""

from __future__ import annotations

import numpy as np


def coincidence_tensor(prob4: np.ndarray, wa: np.ndarray, wb: np.ndarray) -> np.ndarray:
    """Contract basis probabilities with per-mode outcome weights.

    prob4 : (d, d, d, d) occupation probabilities of a four-mode state
    wa    : (ka, d) diagonal POVM weights applied to modes 0 and 1
    wb    : (kb, d) diagonal POVM weights applied to modes 2 and 3

    Returns the (ka, ka, kb, kb) joint outcome probability tensor.
    """
    t = np.einsum("abcd,ia->ibcd", prob4, wa)
    t = np.einsum("ibcd,jb->ijcd", t, wa)
    t = np.einsum("ijcd,kc->ijkd", t, wb)
    return np.einsum("ijkd,ld->ijkl", t, wb)
