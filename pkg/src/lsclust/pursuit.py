"""Least-squares pursuit over a candidate vertex set.

Given a candidate superset believed to contain the target cluster, drop a
slice of columns that look most cluster-interior, solve the least-squares
problem on the remaining Laplacian columns, and reject the vertices whose
solution entry exceeds the rejection threshold. What survives is the
extracted cluster.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyOmegaError
from .sparse_core import (
    Graph,
    IndexSet,
    SparseMatrix,
    abs_matvec_T,
    column_submatrix,
    indicator,
    lsqr,
    rw_laplacian,
    spmv,
)


@dataclass(frozen=True)
class PursuitParams:
    """Pursuit stage hyperparameters.

    gamma : fraction of candidate columns to remove before solving, in (0, 1).
    reject : rejection threshold on solution entries, in [0.1, 0.9]; strictly
        larger entries mark vertices rejected from the cluster.
    """

    gamma: float = 0.2
    reject: float = 0.5

    def __post_init__(self):
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if not 0.1 <= self.reject <= 0.9:
            raise ValueError("reject must lie in [0.1, 0.9]")


@dataclass(frozen=True)
class PursuitResult:
    """Extracted cluster plus solver diagnostics.

    ``solution[j]`` is the least-squares coefficient of vertex
    ``solved_columns.indices[j]``; vertices with coefficient > reject were
    rejected, so ``cluster`` never intersects them and always contains the
    removed column set.
    """

    cluster: IndexSet
    removed: IndexSet
    solution: np.ndarray
    solved_columns: IndexSet
    omega: IndexSet
    solver_iterations: int
    residual_norm: float
    solver_converged: bool
    degenerate: bool = field(default=False)


def removal_count(gamma: float, omega_size: int) -> int:
    """``floor(gamma * |omega|)``, at least 1 so the flat all-ones solution is
    always excluded."""
    return max(1, int(np.floor(gamma * omega_size)))


def select_removal_set(laplacian: SparseMatrix, omega: IndexSet, y, gamma: float) -> IndexSet:
    """Columns of ``omega`` with the smallest ``|L_omega.T| @ |y|`` scores.

    Low score means the column's support only meets near-zero residual rows,
    the signature of a cluster-interior vertex. Ties break by ascending
    vertex index.
    """
    if len(omega) == 0:
        raise EmptyOmegaError("cannot select removal columns from an empty candidate set")
    scores = abs_matvec_T(column_submatrix(laplacian, omega), y)
    k = removal_count(gamma, len(omega))
    # stable sort: ties keep position order, i.e. ascending vertex id
    order = np.argsort(scores, kind="stable")
    return IndexSet(omega.indices[order[:k]])


def cluster_pursuit(
    g: Graph,
    omega: IndexSet,
    params: PursuitParams,
    tol: float = 1e-6,
    max_iter: int = 1000,
    laplacian: SparseMatrix | None = None,
) -> PursuitResult:
    """Extract one cluster from the candidate set ``omega``.

    Pipeline: ``y = L @ 1_omega``; remove the ``floor(gamma * |omega|)``
    lowest-scoring columns; solve ``min ||L_[omega minus removed] x - y||``
    iteratively; reject vertices with solution entry > ``params.reject``.
    A precomputed ``laplacian`` for ``g`` may be passed to avoid rebuilding
    it on repeated calls.
    """
    if len(omega) == 0:
        raise EmptyOmegaError("candidate set is empty")
    lap = rw_laplacian(g) if laplacian is None else laplacian
    y = spmv(lap, indicator(g.n, omega))
    removed = select_removal_set(lap, omega, y, params.gamma)
    solve_cols = omega.difference(removed)
    if len(solve_cols) == 0:
        raise EmptyOmegaError(
            f"candidate set of size {len(omega)} leaves no columns after removing {len(removed)}"
        )
    sub = column_submatrix(lap, solve_cols)
    sol = lsqr(sub, y, tol=tol, max_iter=max_iter)
    x = sol.x
    # NaN coefficients (pathological rank deficiency) count as rejected
    rejected_mask = (x > params.reject) | np.isnan(x)
    rejected = IndexSet(solve_cols.indices[rejected_mask])
    cluster = omega.difference(rejected)
    return PursuitResult(
        cluster=cluster,
        removed=removed,
        solution=x,
        solved_columns=solve_cols,
        omega=omega,
        solver_iterations=sol.iterations,
        residual_norm=sol.residual_norm,
        solver_converged=sol.converged,
    )
