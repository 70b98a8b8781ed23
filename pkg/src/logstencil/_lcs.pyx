# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled longest-common-subsequence kernel.

Same contract as logstencil.kernels.py_lcs_length; exact token equality,
O(len(a) * len(b)) two-row dynamic program. The DP rows live in C arrays so
the only Python-level work per cell is the token comparison.
"""

from cpython.object cimport PyObject
from libc.stdlib cimport free, malloc


def lcs_length(a, b):
    """Length of the longest common subsequence of two token sequences."""
    cdef list la = a if type(a) is list else list(a)
    cdef list lb = b if type(b) is list else list(b)
    cdef Py_ssize_t na = len(la)
    cdef Py_ssize_t nb = len(lb)
    if na == 0 or nb == 0:
        return 0
    # keep the inner dimension (and the DP rows) on the shorter sequence
    if nb > na:
        la, lb = lb, la
        na, nb = nb, na

    cdef Py_ssize_t *prev = <Py_ssize_t *> malloc((nb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *curr = <Py_ssize_t *> malloc((nb + 1) * sizeof(Py_ssize_t))
    if prev == NULL or curr == NULL:
        free(prev)
        free(curr)
        raise MemoryError()

    cdef Py_ssize_t i, j, best
    cdef Py_ssize_t *tmp
    cdef object ai, bj
    try:
        for j in range(nb + 1):
            prev[j] = 0
        curr[0] = 0
        for i in range(1, na + 1):
            ai = la[i - 1]
            for j in range(1, nb + 1):
                bj = lb[j - 1]
                if ai is bj or ai == bj:
                    curr[j] = prev[j - 1] + 1
                else:
                    curr[j] = prev[j] if prev[j] >= curr[j - 1] else curr[j - 1]
            tmp = prev
            prev = curr
            curr = tmp
        best = prev[nb]
    finally:
        free(prev)
        free(curr)
    return best
