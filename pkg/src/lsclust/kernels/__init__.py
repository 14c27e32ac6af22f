"""CSR kernel backend selection.

The compiled Cython extension is preferred; a vectorized numpy fallback keeps
the package functional as pure Python. The choice happens once at import and
can be forced with the ``LSCLUST_KERNELS`` environment variable (``cython`` or
``numpy``) or, for benchmarks and tests, swapped at runtime with
:func:`use_backend`.
"""

import os

from . import _csr_numpy

_BACKENDS = {"numpy": _csr_numpy}

try:
    from . import _csr as _csr_ext

    _BACKENDS["cython"] = _csr_ext
except ImportError:
    _csr_ext = None

_active_name = None
_active = None


def available_backends():
    """Names of the usable backends, preferred first."""
    return tuple(name for name in ("cython", "numpy") if name in _BACKENDS)


def active_backend():
    """Name of the backend currently in use."""
    return _active_name


def use_backend(name):
    """Switch the kernel backend globally. Returns the previous backend name.

    Intended for benchmarking and tests; not thread-safe while kernels run.
    """
    global _active, _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    previous = _active_name
    _active = _BACKENDS[name]
    _active_name = name
    return previous


def matvec(n_rows, n_cols, row_ptr, col_idx, values, x):
    return _active.matvec(n_rows, n_cols, row_ptr, col_idx, values, x)


def matvec_t(n_rows, n_cols, row_ptr, col_idx, values, x):
    return _active.matvec_t(n_rows, n_cols, row_ptr, col_idx, values, x)


def abs_matvec_t(n_rows, n_cols, row_ptr, col_idx, values, x):
    return _active.abs_matvec_t(n_rows, n_cols, row_ptr, col_idx, values, x)


_requested = os.environ.get("LSCLUST_KERNELS")
if _requested:
    use_backend(_requested)
else:
    use_backend("cython" if "cython" in _BACKENDS else "numpy")
