"""CSR sparse matrices, weighted graphs, and the numerical kernels that the
extraction algorithms consume.

Matrices are stored in canonical CSR form: row pointers, strictly increasing
column indices within each row, no explicitly stored zeros. All containers are
immutable after construction and every operation here is a pure function, so
shared instances are safe to use from multiple threads.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import DimensionError, IsolatedVertexError, RankDeficientError

_SYMMETRY_RTOL = 1e-12


def _as_index_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError("index data must be one-dimensional")
    return arr


class IndexSet:
    """Sorted, duplicate-free vertex indices.

    Parameters
    ----------
    indices : array-like of int
        Vertex ids; sorted and deduplicated on construction.
    n : int, optional
        If given, every index must lie in ``[0, n)``.
    """

    __slots__ = ("indices",)

    def __init__(self, indices, n: int | None = None):
        arr = np.unique(_as_index_array(indices))
        if arr.size and arr[0] < 0:
            raise IndexError(f"negative vertex index {arr[0]}")
        if n is not None and arr.size and arr[-1] >= n:
            raise IndexError(f"vertex index {arr[-1]} out of range for n={n}")
        arr.setflags(write=False)
        object.__setattr__(self, "indices", arr)

    def __setattr__(self, name, value):
        raise AttributeError("IndexSet is immutable")

    @classmethod
    def _from_sorted(cls, arr: np.ndarray) -> "IndexSet":
        """Trusted constructor: ``arr`` is already sorted, unique int64."""
        out = object.__new__(cls)
        arr = np.asarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(out, "indices", arr)
        return out

    @classmethod
    def empty(cls) -> "IndexSet":
        return cls._from_sorted(np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self):
        return iter(self.indices.tolist())

    def __contains__(self, vertex) -> bool:
        i = np.searchsorted(self.indices, vertex)
        return bool(i < self.indices.size and self.indices[i] == vertex)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash(self.indices.tobytes())

    def __repr__(self) -> str:
        show = self.indices.tolist() if len(self) <= 12 else self.indices[:12].tolist() + ["..."]
        return f"IndexSet({show}, size={len(self)})"

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet._from_sorted(np.union1d(self.indices, other.indices))

    def difference(self, other: "IndexSet") -> "IndexSet":
        return IndexSet._from_sorted(np.setdiff1d(self.indices, other.indices, assume_unique=True))

    def intersection(self, other: "IndexSet") -> "IndexSet":
        return IndexSet._from_sorted(np.intersect1d(self.indices, other.indices, assume_unique=True))

    def issubset(self, other: "IndexSet") -> bool:
        return len(self.intersection(other)) == len(self)


class SparseMatrix:
    """Real matrix in canonical CSR form.

    Invariants enforced at construction: ``row_ptr`` is non-decreasing with
    ``row_ptr[0] == 0`` and ``row_ptr[-1] == nnz``; column indices are strictly
    increasing within each row and in range; no stored value is exactly zero.
    """

    __slots__ = ("n_rows", "n_cols", "row_ptr", "col_idx", "values")

    def __init__(self, n_rows, n_cols, row_ptr, col_idx, values, validate: bool = True):
        n_rows = int(n_rows)
        n_cols = int(n_cols)
        row_ptr = np.array(row_ptr, dtype=np.int64, copy=True)
        col_idx = np.array(col_idx, dtype=np.int64, copy=True)
        vals = np.array(values, dtype=np.float64, copy=True)
        if validate:
            if n_rows < 0 or n_cols < 0:
                raise ValueError("matrix dimensions must be non-negative")
            if row_ptr.shape != (n_rows + 1,):
                raise ValueError("row_ptr must have length n_rows + 1")
            if row_ptr[0] != 0 or row_ptr[-1] != col_idx.size or col_idx.size != vals.size:
                raise ValueError("row_ptr endpoints inconsistent with data arrays")
            if np.any(np.diff(row_ptr) < 0):
                raise ValueError("row_ptr must be non-decreasing")
            if col_idx.size:
                if col_idx.min() < 0 or col_idx.max() >= n_cols:
                    raise ValueError("column index out of range")
                # strictly increasing inside each row: a non-increasing step is
                # only legal at a row boundary
                steps = np.diff(col_idx) <= 0
                boundaries = np.zeros(col_idx.size - 1, dtype=bool)
                inner = row_ptr[1:-1]
                boundaries[inner[(inner > 0) & (inner < col_idx.size)] - 1] = True
                if np.any(steps & ~boundaries):
                    raise ValueError("column indices must be strictly increasing within rows")
            if np.any(vals == 0.0):
                raise ValueError("explicit zeros are not stored")
            if not np.all(np.isfinite(vals)):
                raise ValueError("matrix values must be finite")
        for arr in (row_ptr, col_idx, vals):
            arr.setflags(write=False)
        object.__setattr__(self, "n_rows", n_rows)
        object.__setattr__(self, "n_cols", n_cols)
        object.__setattr__(self, "row_ptr", row_ptr)
        object.__setattr__(self, "col_idx", col_idx)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("SparseMatrix is immutable")

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @classmethod
    def from_coo(cls, n_rows, n_cols, rows, cols, values, combine: str = "sum") -> "SparseMatrix":
        """Build canonical CSR from coordinate triplets.

        Duplicate coordinates are merged with ``combine`` (``sum`` or ``max``);
        entries that end up exactly zero are dropped.
        """
        rows = _as_index_array(rows)
        cols = _as_index_array(cols)
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim == 0:
            vals = np.broadcast_to(vals, rows.shape).copy()
        if not (rows.size == cols.size == vals.size):
            raise ValueError("rows, cols, values must have equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= n_rows:
                raise ValueError("row index out of range")
            if cols.min() < 0 or cols.max() >= n_cols:
                raise ValueError("column index out of range")
            order = np.lexsort((cols, rows))
            rows, cols, vals = rows[order], cols[order], vals[order]
            first = np.ones(rows.size, dtype=bool)
            first[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            starts = np.flatnonzero(first)
            if combine == "sum":
                merged = np.add.reduceat(vals, starts)
            elif combine == "max":
                merged = np.maximum.reduceat(vals, starts)
            else:
                raise ValueError(f"unknown combine mode {combine!r}")
            rows, cols, vals = rows[starts], cols[starts], merged
            keep = vals != 0.0
            rows, cols, vals = rows[keep], cols[keep], vals[keep]
        row_ptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n_rows), out=row_ptr[1:])
        return cls(n_rows, n_cols, row_ptr, cols, vals, validate=False)

    @classmethod
    def from_dense(cls, array) -> "SparseMatrix":
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("from_dense expects a 2-d array")
        rows, cols = np.nonzero(arr)
        return cls.from_coo(arr.shape[0], arr.shape[1], rows, cols, arr[rows, cols])

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        idx = np.arange(n, dtype=np.int64)
        ptr = np.arange(n + 1, dtype=np.int64)
        return cls(n, n, ptr, idx, np.ones(n), validate=False)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        counts = np.diff(self.row_ptr)
        rows = np.repeat(np.arange(self.n_rows), counts)
        out[rows, self.col_idx] = self.values
        return out

    def to_coo(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        counts = np.diff(self.row_ptr)
        rows = np.repeat(np.arange(self.n_rows, dtype=np.int64), counts)
        return rows, self.col_idx.copy(), self.values.copy()

    def row_sums(self) -> np.ndarray:
        if self.nnz == 0:
            return np.zeros(self.n_rows)
        counts = np.diff(self.row_ptr)
        rows = np.repeat(np.arange(self.n_rows), counts)
        return np.bincount(rows, weights=self.values, minlength=self.n_rows)

    def __eq__(self, other) -> bool:
        """Structural equality of canonical representations."""
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.shape, self.col_idx.tobytes(), self.values.tobytes()))

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


class Graph:
    """Undirected weighted graph: symmetric non-negative adjacency with an
    empty diagonal, plus the cached weighted degree vector.

    Parameters
    ----------
    adjacency : SparseMatrix
        Square matrix; must be symmetric to relative tolerance 1e-12.
    symmetrize : {None, "average"}
        With ``"average"``, a near-symmetric input is repaired to
        ``(A + A.T) / 2`` with bit-equal mirrored entries instead of rejected.
    """

    __slots__ = ("adjacency", "degrees")

    def __init__(self, adjacency: SparseMatrix, symmetrize: str | None = None):
        if adjacency.n_rows != adjacency.n_cols:
            raise ValueError("adjacency must be square")
        counts = np.diff(adjacency.row_ptr)
        rows = np.repeat(np.arange(adjacency.n_rows), counts)
        if np.any(rows == adjacency.col_idx):
            raise ValueError("self-loops are not allowed")
        if np.any(adjacency.values < 0):
            raise ValueError("edge weights must be non-negative")
        if not _is_symmetric(adjacency):
            if symmetrize == "average":
                r, c, v = adjacency.to_coo()
                adjacency = _symmetrized(adjacency.n_rows, r, c, v, combine="sum", scale=0.5)
            elif symmetrize is None:
                raise ValueError("adjacency is not symmetric (pass symmetrize='average' to repair)")
            else:
                raise ValueError(f"unknown symmetrize mode {symmetrize!r}")
        degrees = adjacency.row_sums()
        degrees.setflags(write=False)
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "degrees", degrees)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def n(self) -> int:
        return self.adjacency.n_rows

    @classmethod
    def from_edges(cls, n: int, u, v, weights=None) -> "Graph":
        """Build from undirected edge triples; duplicate edges sum weights."""
        u = _as_index_array(u)
        v = _as_index_array(v)
        if weights is None:
            w = np.ones(u.size)
        else:
            w = np.asarray(weights, dtype=np.float64)
        if np.any(u == v):
            raise ValueError("self-loops are not allowed")
        adj = SparseMatrix.from_coo(
            n, n, np.concatenate([u, v]), np.concatenate([v, u]), np.concatenate([w, w])
        )
        return cls(adj)

    def induced_subgraph(self, vertices: IndexSet) -> "Graph":
        """Subgraph on ``vertices`` with ids compacted to 0..len-1 preserving
        sorted order; ``vertices.indices[new_id]`` recovers the original id."""
        keep = vertices.indices
        sub = column_submatrix(self.adjacency, vertices)
        counts = np.diff(sub.row_ptr)
        rows = np.repeat(np.arange(sub.n_rows), counts)
        take = np.isin(rows, keep)
        new_rows = np.searchsorted(keep, rows[take])
        adj = SparseMatrix.from_coo(keep.size, keep.size, new_rows, sub.col_idx[take], sub.values[take])
        return Graph(adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.adjacency.nnz // 2})"


def _is_symmetric(m: SparseMatrix) -> bool:
    t = transpose(m)
    if not (np.array_equal(m.row_ptr, t.row_ptr) and np.array_equal(m.col_idx, t.col_idx)):
        return False
    tol = _SYMMETRY_RTOL * np.maximum(1.0, np.abs(m.values))
    return bool(np.all(np.abs(m.values - t.values) <= tol))


def _symmetrized(n, rows, cols, vals, combine: str, scale: float = 1.0) -> SparseMatrix:
    """Combine off-diagonal COO entries per unordered vertex pair, then emit
    both orientations so mirrored values are bit-equal."""
    off = rows != cols
    rows, cols, vals = rows[off], cols[off], vals[off]
    lo = np.minimum(rows, cols)
    hi = np.maximum(rows, cols)
    if lo.size:
        order = np.lexsort((hi, lo))
        lo, hi, vals = lo[order], hi[order], vals[order]
        first = np.ones(lo.size, dtype=bool)
        first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
        starts = np.flatnonzero(first)
        if combine == "sum":
            merged = np.add.reduceat(vals, starts)
        elif combine == "max":
            merged = np.maximum.reduceat(vals, starts)
        else:
            raise ValueError(f"unknown combine mode {combine!r}")
        lo, hi, vals = lo[starts], hi[starts], merged * scale
    return SparseMatrix.from_coo(
        n, n, np.concatenate([lo, hi]), np.concatenate([hi, lo]), np.concatenate([vals, vals])
    )


def indicator(n: int, subset: IndexSet) -> np.ndarray:
    """Dense 0/1 vector of length ``n`` supported on ``subset``."""
    v = np.zeros(n)
    v[subset.indices] = 1.0
    return v


def spmv(m: SparseMatrix, x) -> np.ndarray:
    """Matrix-vector product ``m @ x``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (m.n_cols,):
        raise DimensionError(f"vector length {x.shape} incompatible with {m.shape}")
    return kernels.matvec(m.n_rows, m.n_cols, m.row_ptr, m.col_idx, m.values, x)


def _spmv_t(m: SparseMatrix, x: np.ndarray) -> np.ndarray:
    """``m.T @ x`` without materializing the transpose."""
    return kernels.matvec_t(m.n_rows, m.n_cols, m.row_ptr, m.col_idx, m.values, x)


def abs_matvec_T(m: SparseMatrix, y) -> np.ndarray:
    """``|m.T| @ |y|``: entry j sums |m_ij| * |y_i| over rows i."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (m.n_rows,):
        raise DimensionError(f"vector length {y.shape} incompatible with {m.shape}")
    return kernels.abs_matvec_t(m.n_rows, m.n_cols, m.row_ptr, m.col_idx, m.values, y)


def transpose(m: SparseMatrix) -> SparseMatrix:
    counts = np.diff(m.row_ptr)
    rows = np.repeat(np.arange(m.n_rows, dtype=np.int64), counts)
    order = np.argsort(m.col_idx, kind="stable")
    new_ptr = np.zeros(m.n_cols + 1, dtype=np.int64)
    np.cumsum(np.bincount(m.col_idx, minlength=m.n_cols), out=new_ptr[1:])
    return SparseMatrix(m.n_cols, m.n_rows, new_ptr, rows[order], m.values[order], validate=False)


def _check_positive_degrees(degrees: np.ndarray):
    zero = np.flatnonzero(degrees == 0)
    if zero.size:
        raise IsolatedVertexError(int(zero[0]))


def rw_laplacian(g: Graph) -> SparseMatrix:
    """Random-walk graph Laplacian ``L = I - D^{-1} A``.

    Diagonal entries are exactly 1; each row sums to zero up to rounding.
    Raises IsolatedVertexError if any vertex has zero degree.

    Built by merging the unit diagonal into each already-sorted adjacency
    row, so construction is O(nnz) with no global sort.
    """
    _check_positive_degrees(g.degrees)
    a = g.adjacency
    n = g.n
    counts = np.diff(a.row_ptr)
    rows = np.repeat(np.arange(n, dtype=np.int64), counts)
    new_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts + 1, out=new_ptr[1:])
    # each off-diagonal entry shifts right by one once the diagonal of its
    # row precedes it; the diagonal lands after the sub-diagonal entries
    after_diag = a.col_idx > rows
    entry_pos = new_ptr[rows] + (np.arange(a.nnz) - a.row_ptr[rows]) + after_diag
    below = np.bincount(rows[~after_diag], minlength=n)
    diag_pos = new_ptr[:-1] + below
    out_cols = np.empty(a.nnz + n, dtype=np.int64)
    out_vals = np.empty(a.nnz + n)
    out_cols[entry_pos] = a.col_idx
    out_vals[entry_pos] = -a.values / g.degrees[rows]
    out_cols[diag_pos] = np.arange(n, dtype=np.int64)
    out_vals[diag_pos] = 1.0
    return SparseMatrix(n, n, new_ptr, out_cols, out_vals, validate=False)


def transition_matrix(g: Graph) -> SparseMatrix:
    """Column-stochastic transition matrix ``P = A D^{-1}``."""
    _check_positive_degrees(g.degrees)
    a = g.adjacency
    return SparseMatrix(
        g.n, g.n, a.row_ptr, a.col_idx, a.values / g.degrees[a.col_idx], validate=False
    )


def column_submatrix(m: SparseMatrix, subset: IndexSet) -> SparseMatrix:
    """Columns of ``m`` restricted to ``subset``; output column j corresponds
    to original column ``subset.indices[j]``."""
    sel = subset.indices
    if sel.size and sel[-1] >= m.n_cols:
        raise IndexError(f"column {sel[-1]} out of range for {m.shape}")
    if sel.size == 0:
        return SparseMatrix(m.n_rows, 0, np.zeros(m.n_rows + 1, dtype=np.int64), [], [], validate=False)
    # membership and renumbering via O(n_cols) lookup tables, no search
    rank = np.full(m.n_cols, -1, dtype=np.int64)
    rank[sel] = np.arange(sel.size, dtype=np.int64)
    new_cols = rank[m.col_idx]
    keep = new_cols >= 0
    counts = np.diff(m.row_ptr)
    rows = np.repeat(np.arange(m.n_rows, dtype=np.int64), counts)[keep]
    new_ptr = np.zeros(m.n_rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=m.n_rows), out=new_ptr[1:])
    return SparseMatrix(m.n_rows, sel.size, new_ptr, new_cols[keep], m.values[keep], validate=False)


class LsqrResult:
    """Solution of an iterative least-squares solve plus diagnostics."""

    __slots__ = ("x", "iterations", "residual_norm", "converged")

    def __init__(self, x, iterations, residual_norm, converged):
        self.x = x
        self.iterations = iterations
        self.residual_norm = residual_norm
        self.converged = converged

    def __iter__(self):
        return iter((self.x, self.iterations, self.residual_norm))

    def __repr__(self):
        return (
            f"LsqrResult(iterations={self.iterations}, "
            f"residual_norm={self.residual_norm:.3e}, converged={self.converged})"
        )


def lsqr(m: SparseMatrix, y, tol: float = 1e-6, max_iter: int = 1000) -> LsqrResult:
    """Approximately minimize ``||m @ x - y||_2`` by conjugate-gradient
    iteration on the normal equations (CGLS).

    Stops once ``||m.T @ (m @ x - y)|| <= tol * ||m.T @ y||`` or after
    ``max_iter`` iterations, whichever comes first; in the latter case the
    best iterate so far is returned with ``converged=False``. Deterministic
    for fixed inputs.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (m.n_rows,):
        raise DimensionError(f"vector length {y.shape} incompatible with {m.shape}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.zeros(m.n_cols)
    r = y.copy()
    s = _spmv_t(m, r)
    gamma = float(s @ s)
    threshold = tol * np.sqrt(gamma)
    if gamma == 0.0 or m.n_cols == 0:
        return LsqrResult(x, 0, float(np.linalg.norm(y)), True)
    p = s.copy()
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        q = spmv(m, p)
        qq = float(q @ q)
        if qq == 0.0:
            iterations -= 1
            break
        alpha = gamma / qq
        x += alpha * p
        r -= alpha * q
        s = _spmv_t(m, r)
        gamma_new = float(s @ s)
        if np.sqrt(gamma_new) <= threshold:
            converged = True
            break
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new
    residual = float(np.linalg.norm(spmv(m, x) - y))
    return LsqrResult(x, iterations, residual, converged)


def cond_normal(m: SparseMatrix, max_steps: int = 800) -> float:
    """Condition number of ``m.T @ m`` from its extreme eigenvalues.

    The spectrum endpoints come from a Lanczos sweep with full
    reorthogonalization applied to ``v -> m.T @ (m @ v)``; the sweep is run to
    completion for matrices up to ``max_steps`` columns, so the estimate is
    exact there up to rounding. Raises RankDeficientError when the smallest
    eigenvalue falls below ``1e-12`` times the largest.
    """
    n = m.n_cols
    if n == 0:
        raise ValueError("matrix has no columns")

    def normal_matvec(v):
        return _spmv_t(m, spmv(m, v))

    lo, hi = _lanczos_extremes(normal_matvec, n, min(n, max_steps))
    if hi <= 0:
        raise RankDeficientError("normal matrix is numerically zero")
    if lo < 1e-12 * hi:
        raise RankDeficientError(
            f"smallest normal-matrix eigenvalue {lo:.3e} below 1e-12 * largest {hi:.3e}"
        )
    return float(hi / lo)


def _lanczos_extremes(matvec_fn, n: int, steps: int) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a symmetric PSD operator.

    Deterministic: the start vector comes from a fixed-seed generator. A
    random start has weight in every eigenspace (almost surely), so a run to
    breakdown captures every distinct eigenvalue.
    """
    rng = np.random.default_rng(0x1A2B3C4D)
    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)
    basis = np.empty((steps, n))
    alphas = np.empty(steps)
    betas = np.empty(max(steps - 1, 0))
    q_prev = np.zeros(n)
    beta = 0.0
    k = 0
    scale = 0.0
    while k < steps:
        basis[k] = q
        w = matvec_fn(q)
        alpha = float(q @ w)
        scale = max(scale, abs(alpha), beta)
        w -= alpha * q + beta * q_prev
        # full reorthogonalization, twice for stability
        for _ in range(2):
            w -= basis[: k + 1].T @ (basis[: k + 1] @ w)
        alphas[k] = alpha
        k += 1
        beta = float(np.linalg.norm(w))
        if beta <= 1e-13 * max(scale, 1e-300) or k == steps:
            break
        betas[k - 1] = beta
        q_prev = q
        q = w / beta
    tri = np.diag(alphas[:k])
    if k > 1:
        off = betas[: k - 1]
        tri += np.diag(off, 1) + np.diag(off, -1)
    eigs = np.linalg.eigvalsh(tri)
    return float(eigs[0]), float(eigs[-1])
