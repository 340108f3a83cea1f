# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled coincidence-tensor kernel.

Same staged contraction as `_kernels_py.coincidence_tensor`, written as
explicit loops: the tensors are tiny (dim <= ~10, 2-4 outcomes), so Python
and einsum dispatch overhead dominates the NumPy path when the kernel sits
inside a squeezing-parameter optimization loop.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def coincidence_tensor(double[:, :, :, ::1] prob4, double[:, ::1] wa, double[:, ::1] wb):
    """Contract basis probabilities with per-mode outcome weights.

    prob4 : (d, d, d, d) occupation probabilities of a four-mode state
    wa    : (ka, d) diagonal POVM weights applied to modes 0 and 1
    wb    : (kb, d) diagonal POVM weights applied to modes 2 and 3

    Returns the (ka, ka, kb, kb) joint outcome probability tensor.
    """
    cdef Py_ssize_t d = prob4.shape[0]
    cdef Py_ssize_t ka = wa.shape[0]
    cdef Py_ssize_t kb = wb.shape[0]
    cdef Py_ssize_t a, b, c, e, i, j, k, l
    cdef double acc

    t1_arr = np.empty((ka, d, d, d), dtype=np.float64)
    t2_arr = np.empty((ka, ka, d, d), dtype=np.float64)
    t3_arr = np.empty((ka, ka, kb, d), dtype=np.float64)
    out_arr = np.empty((ka, ka, kb, kb), dtype=np.float64)
    cdef double[:, :, :, ::1] t1 = t1_arr
    cdef double[:, :, :, ::1] t2 = t2_arr
    cdef double[:, :, :, ::1] t3 = t3_arr
    cdef double[:, :, :, ::1] out = out_arr

    for i in range(ka):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    acc = 0.0
                    for a in range(d):
                        acc += wa[i, a] * prob4[a, b, c, e]
                    t1[i, b, c, e] = acc

    for i in range(ka):
        for j in range(ka):
            for c in range(d):
                for e in range(d):
                    acc = 0.0
                    for b in range(d):
                        acc += wa[j, b] * t1[i, b, c, e]
                    t2[i, j, c, e] = acc

    for i in range(ka):
        for j in range(ka):
            for k in range(kb):
                for e in range(d):
                    acc = 0.0
                    for c in range(d):
                        acc += wb[k, c] * t2[i, j, c, e]
                    t3[i, j, k, e] = acc

    for i in range(ka):
        for j in range(ka):
            for k in range(kb):
                for l in range(kb):
                    acc = 0.0
                    for e in range(d):
                        acc += wb[l, e] * t3[i, j, k, e]
                    out[i, j, k, l] = acc

    return out_arr
