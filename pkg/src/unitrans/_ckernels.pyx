# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels: CTC prefix beam search and Levenshtein distance."""

from libcpp.vector cimport vector

import numpy as np


cdef extern from "_beam.hpp" namespace "unitrans":
    cdef cppclass BeamResult:
        vector[int] labels
        double score

    BeamResult prefix_beam_search(const double* logp, int T, int V, int blank,
                                  int beam_size) nogil


BACKEND = "compiled"


def beam_search(logp, int beam_size, int blank=0):
    """Return ``(labels, log_score)`` of the best prefix; see _pykernels."""
    cdef const double[:, ::1] view = np.ascontiguousarray(logp, dtype=np.float64)
    cdef int T = view.shape[0]
    cdef int V = view.shape[1]
    cdef BeamResult res
    cdef const double* ptr = NULL
    if T > 0:
        ptr = &view[0, 0]
    with nogil:
        res = prefix_beam_search(ptr, T, V, blank, beam_size)
    return tuple(res.labels), res.score


def edit_distance(a, b):
    """Unit-cost Levenshtein distance between two int64 sequences."""
    cdef const long long[::1] x = np.ascontiguousarray(a, dtype=np.int64)
    cdef const long long[::1] y = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0], i, j
    cdef Py_ssize_t sub, best
    if n == 0:
        return m
    if m == 0:
        return n
    cdef vector[Py_ssize_t] prev = vector[Py_ssize_t](m + 1)
    cdef vector[Py_ssize_t] cur = vector[Py_ssize_t](m + 1)
    with nogil:
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            cur[0] = i
            for j in range(1, m + 1):
                sub = prev[j - 1] + (0 if x[i - 1] == y[j - 1] else 1)
                best = prev[j] + 1
                if cur[j - 1] + 1 < best:
                    best = cur[j - 1] + 1
                if sub < best:
                    best = sub
                cur[j] = best
            prev.swap(cur)
    return prev[m]
