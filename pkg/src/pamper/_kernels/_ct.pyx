# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled split-count and partition kernels.

Inputs must be C-contiguous: X as (n, F) uint8, y as (n,) uint8, idx as
int64 row indices. Counts are plain integers, so results match the numpy
fallback bit for bit.
"""

import numpy as np


def node_counts(const unsigned char[:, ::1] X,
                const unsigned char[::1] y,
                const long long[::1] idx):
    cdef Py_ssize_t n_feat = X.shape[1]
    n_true_arr = np.zeros(n_feat, dtype=np.int64)
    pos_true_arr = np.zeros(n_feat, dtype=np.int64)
    cdef long long[::1] n_true = n_true_arr
    cdef long long[::1] pos_true = pos_true_arr
    cdef Py_ssize_t a, j, i
    cdef Py_ssize_t k = idx.shape[0]
    cdef long long pos = 0
    cdef unsigned char b
    with nogil:
        for a in range(k):
            i = <Py_ssize_t> idx[a]
            if y[i]:
                pos += 1
                for j in range(n_feat):
                    b = X[i, j]
                    n_true[j] += b
                    pos_true[j] += b
            else:
                for j in range(n_feat):
                    n_true[j] += X[i, j]
    return n_true_arr, pos_true_arr, pos


def partition(const unsigned char[:, ::1] X,
              const long long[::1] idx,
              Py_ssize_t feature,
              Py_ssize_t n_true):
    """Order-preserving split of idx by one bit; n_true must be exact."""
    cdef Py_ssize_t k = idx.shape[0]
    false_arr = np.empty(k - n_true, dtype=np.int64)
    true_arr = np.empty(n_true, dtype=np.int64)
    cdef long long[::1] out_false = false_arr
    cdef long long[::1] out_true = true_arr
    cdef Py_ssize_t a, i
    cdef Py_ssize_t nf = 0, nt = 0
    with nogil:
        for a in range(k):
            i = <Py_ssize_t> idx[a]
            if X[i, feature]:
                out_true[nt] = i
                nt += 1
            else:
                out_false[nf] = i
                nf += 1
    return false_arr, true_arr
