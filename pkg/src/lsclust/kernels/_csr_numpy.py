"""Pure-numpy CSR kernels, used when the compiled extension is unavailable.

All functions take raw CSR arrays (row_ptr, col_idx, values) so they stay
importable without the rest of the package.
"""

import numpy as np


def matvec(n_rows, n_cols, row_ptr, col_idx, values, x):
    """y = M @ x for CSR-encoded M."""
    if len(values) == 0:
        return np.zeros(n_rows)
    counts = np.diff(row_ptr)
    rows = np.repeat(np.arange(n_rows), counts)
    return np.bincount(rows, weights=values * x[col_idx], minlength=n_rows)


def matvec_t(n_rows, n_cols, row_ptr, col_idx, values, x):
    """y = M.T @ x for CSR-encoded M (no transpose is materialized)."""
    if len(values) == 0:
        return np.zeros(n_cols)
    counts = np.diff(row_ptr)
    expanded = np.repeat(x, counts)
    return np.bincount(col_idx, weights=values * expanded, minlength=n_cols)


def abs_matvec_t(n_rows, n_cols, row_ptr, col_idx, values, x):
    """y = |M.T| @ |x| for CSR-encoded M."""
    if len(values) == 0:
        return np.zeros(n_cols)
    counts = np.diff(row_ptr)
    expanded = np.repeat(np.abs(x), counts)
    return np.bincount(col_idx, weights=np.abs(values) * expanded, minlength=n_cols)
