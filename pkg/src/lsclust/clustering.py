"""Single-cluster extraction (alternating diffusion and pursuit rounds) and
whole-graph partitioning by repeated extraction with subgraph deletion."""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ClusteringWarning, EmptyOmegaError, EmptySeedError, SeedConsumedError
from .pursuit import PursuitParams, PursuitResult, cluster_pursuit
from .random_walk import RandomWalkParams, diffusion_mass, threshold_count, top_s
from .sparse_core import Graph, IndexSet, rw_laplacian, transition_matrix

UNASSIGNED = -1


@dataclass(frozen=True)
class ExtractionParams:
    """Everything the extraction loop needs: diffusion parameters, pursuit
    parameters, and the number of diffusion/pursuit rounds (1 is the analyzed
    setting; 2-3 can help when seeds are very sparse)."""

    rw: RandomWalkParams
    pursuit: PursuitParams
    max_iter: int = 1

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class ClusterLabeling:
    """Result of partitioning: per-vertex labels (``UNASSIGNED`` = -1 for
    vertices no cluster claimed) and the extracted clusters in seed-set
    order, i.e. ``clusters[i]`` grew from ``seed_sets[i]``."""

    assignments: np.ndarray
    clusters: list[IndexSet]
    seed_sets: list[IndexSet]
    diagnostics: list[PursuitResult] = field(default_factory=list, repr=False)


def lsc(
    g: Graph,
    seeds: IndexSet,
    params: ExtractionParams,
    tol: float = 1e-6,
    solver_max_iter: int = 1000,
) -> PursuitResult:
    """Extract the cluster around ``seeds``.

    Each round grows a candidate superset by random-walk thresholding from the
    current seed set, then prunes it by least-squares pursuit; the pursuit
    output seeds the next round. The estimated cluster size stays fixed
    across rounds. If a later round degenerates (no usable candidate set),
    the previous round's result is returned flagged ``degenerate``.
    """
    if len(seeds) == 0:
        raise EmptySeedError("lsc requires at least one seed vertex")
    p = transition_matrix(g)
    lap = rw_laplacian(g)
    s = threshold_count(params.rw.delta, params.rw.n_hat, g.n)
    gamma_set = seeds
    result = None
    for _ in range(params.max_iter):
        v = diffusion_mass(p, g.degrees, gamma_set, params.rw.t)
        omega = top_s(v / g.degrees, s).union(gamma_set)
        try:
            round_result = cluster_pursuit(
                g, omega, params.pursuit, tol=tol, max_iter=solver_max_iter, laplacian=lap
            )
        except EmptyOmegaError:
            if result is None:
                raise
            return dataclasses.replace(result, degenerate=True)
        if len(round_result.cluster) == 0:
            if result is None:
                # first round: fall back to the seeds themselves
                return dataclasses.replace(round_result, cluster=seeds, degenerate=True)
            return dataclasses.replace(result, degenerate=True)
        result = round_result
        gamma_set = result.cluster
    return result


def ilsc(
    g: Graph,
    seed_sets: list[IndexSet],
    n_hats: list[int],
    params: ExtractionParams,
    remainder: str = "unassigned",
    tol: float = 1e-6,
    solver_max_iter: int = 1000,
) -> ClusterLabeling:
    """Partition by extracting one cluster at a time.

    For each seed set in order, run :func:`lsc` on the residual graph, record
    the extracted cluster in original vertex ids, then delete those vertices
    and their incident edges before the next extraction. Vertices that end up
    with zero degree along the way cannot join any later cluster; they are
    skipped and left unassigned (subject to the remainder policy).

    remainder : what to do with vertices never extracted —
        ``"unassigned"`` leaves them labeled -1, ``"last"`` adds them to the
        final cluster, ``"nearest-seed-walk"`` assigns each to the seed set
        with the largest diffusion mass at that vertex on the original graph.
    """
    if remainder not in ("unassigned", "last", "nearest-seed-walk"):
        raise ValueError(f"unknown remainder policy {remainder!r}")
    k = len(seed_sets)
    if k < 1:
        raise ValueError("at least one seed set is required")
    if len(n_hats) != k:
        raise ValueError("n_hats must match seed_sets in length")
    for i, seeds in enumerate(seed_sets):
        if len(seeds) == 0:
            raise EmptySeedError(f"seed set {i} is empty")
    all_seeds = np.concatenate([s.indices for s in seed_sets])
    if np.unique(all_seeds).size != all_seeds.size:
        raise ValueError("seed sets must be pairwise disjoint")

    remaining = np.arange(g.n, dtype=np.int64)
    assignments = np.full(g.n, UNASSIGNED, dtype=np.int64)
    clusters: list[IndexSet] = []
    diagnostics: list[PursuitResult] = []
    for i in range(k):
        if remaining.size == 0:
            raise SeedConsumedError(i)
        subgraph = g.induced_subgraph(IndexSet._from_sorted(remaining))
        active_mask = subgraph.degrees > 0
        if not np.all(active_mask):
            stranded = remaining[~active_mask]
            warnings.warn(
                f"{stranded.size} vertices have zero degree in the residual graph "
                f"and stay unassigned",
                ClusteringWarning,
            )
            remaining = remaining[active_mask]
            if remaining.size == 0:
                raise SeedConsumedError(i)
            subgraph = g.induced_subgraph(IndexSet._from_sorted(remaining))
        pos = np.searchsorted(remaining, seed_sets[i].indices)
        pos_ok = (pos < remaining.size) & (
            remaining[np.minimum(pos, max(remaining.size - 1, 0))] == seed_sets[i].indices
        )
        if not np.all(pos_ok):
            dropped = int((~pos_ok).sum())
            if dropped == len(seed_sets[i]):
                raise SeedConsumedError(i)
            warnings.warn(
                f"dropping {dropped} seed(s) of cluster {i} no longer present "
                f"in the residual graph",
                ClusteringWarning,
            )
        local_seeds = IndexSet._from_sorted(pos[pos_ok])
        local_params = dataclasses.replace(
            params, rw=dataclasses.replace(params.rw, n_hat=int(n_hats[i]))
        )
        result = lsc(subgraph, local_seeds, local_params, tol=tol, solver_max_iter=solver_max_iter)
        cluster_orig = IndexSet._from_sorted(remaining[result.cluster.indices])
        clusters.append(cluster_orig)
        diagnostics.append(result)
        assignments[cluster_orig.indices] = i
        remaining = np.setdiff1d(remaining, cluster_orig.indices, assume_unique=True)

    leftovers = np.flatnonzero(assignments == UNASSIGNED)
    if leftovers.size and remainder == "last":
        assignments[leftovers] = k - 1
        clusters[k - 1] = clusters[k - 1].union(IndexSet._from_sorted(leftovers))
    elif leftovers.size and remainder == "nearest-seed-walk":
        p = transition_matrix(g)
        masses = np.stack(
            [diffusion_mass(p, g.degrees, seeds, params.rw.t) for seeds in seed_sets]
        )
        nearest = np.argmax(masses[:, leftovers], axis=0)
        assignments[leftovers] = nearest
        for i in range(k):
            gained = leftovers[nearest == i]
            if gained.size:
                clusters[i] = clusters[i].union(IndexSet._from_sorted(gained))
    return ClusterLabeling(
        assignments=assignments,
        clusters=clusters,
        seed_sets=list(seed_sets),
        diagnostics=diagnostics,
    )
