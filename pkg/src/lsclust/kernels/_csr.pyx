# cython: language_level=3
"""Compiled CSR kernels: the per-iteration hot loops of diffusion and the
least-squares solver. Signatures mirror lsclust.kernels._csr_numpy."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def matvec(Py_ssize_t n_rows, Py_ssize_t n_cols,
           const long long[:] row_ptr, const long long[:] col_idx,
           const double[:] values, const double[:] x):
    out = np.zeros(n_rows)
    cdef double[:] y = out
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n_rows):
        acc = 0.0
        for j in range(row_ptr[i], row_ptr[i + 1]):
            acc += values[j] * x[col_idx[j]]
        y[i] = acc
    return out


def matvec_t(Py_ssize_t n_rows, Py_ssize_t n_cols,
             const long long[:] row_ptr, const long long[:] col_idx,
             const double[:] values, const double[:] x):
    out = np.zeros(n_cols)
    cdef double[:] y = out
    cdef Py_ssize_t i, j
    cdef double xi
    for i in range(n_rows):
        xi = x[i]
        if xi == 0.0:
            continue
        for j in range(row_ptr[i], row_ptr[i + 1]):
            y[col_idx[j]] += values[j] * xi
    return out


def abs_matvec_t(Py_ssize_t n_rows, Py_ssize_t n_cols,
                 const long long[:] row_ptr, const long long[:] col_idx,
                 const double[:] values, const double[:] x):
    out = np.zeros(n_cols)
    cdef double[:] y = out
    cdef Py_ssize_t i, j
    cdef double xi
    for i in range(n_rows):
        xi = x[i]
        if xi < 0.0:
            xi = -xi
        if xi == 0.0:
            continue
        for j in range(row_ptr[i], row_ptr[i + 1]):
            y[col_idx[j]] += (values[j] if values[j] >= 0.0 else -values[j]) * xi
    return out
