import numpy as np
import pytest

from lsclust import (
    EmptyOmegaError,
    Graph,
    IndexSet,
    PursuitParams,
    RandomWalkParams,
    cluster_pursuit,
    cond_normal,
    column_submatrix,
    indicator,
    random_walk_threshold,
    rw_laplacian,
    select_removal_set,
    spmv,
    ssbm,
    sym_diff_ratio,
)
from lsclust.pursuit import removal_count


class TestSelectRemovalSet:
    def test_two_triangle_scores(self, two_triangles):
        lap = rw_laplacian(two_triangles)
        omega = IndexSet([0, 1, 2, 3])
        y = spmv(lap, indicator(6, omega))
        removed = select_removal_set(lap, omega, y, gamma=0.25)
        assert list(removed) == [0]  # ties among {0,1,2} break to the lowest id

    def test_zero_rhs_takes_lowest_ids(self, two_triangles):
        lap = rw_laplacian(two_triangles)
        omega = IndexSet([0, 1, 2])  # a full component: y = 0, all scores 0
        y = spmv(lap, indicator(6, omega))
        assert np.allclose(y, 0.0)
        removed = select_removal_set(lap, omega, y, gamma=0.67)
        assert list(removed) == [0, 1]

    def test_removal_count_floor(self):
        assert removal_count(0.25, 4) == 1
        assert removal_count(0.2, 10) == 2
        assert removal_count(0.1, 3) == 1  # never zero

    def test_monte_carlo_removal_stays_in_cluster(self):
        """At default settings the removed columns should lie inside the
        target block in >= 90% of draws."""
        trials = 60
        hits = 0
        children = np.random.SeedSequence(777001).spawn(trials)
        n = 600
        p, q = 8 * np.log(n) / n, np.log(n) / n
        for child in children:
            g_seed, s_seed = child.spawn(2)
            graph, truth = ssbm(n, 3, p, q, rng_seed=int(g_seed.generate_state(1)[0]))
            block = truth.block(0)
            rng = np.random.Generator(np.random.PCG64(s_seed))
            seeds = IndexSet(rng.choice(block.indices, 3, replace=False))
            omega = random_walk_threshold(graph, seeds, RandomWalkParams(0.6, 3, 200))
            lap = rw_laplacian(graph)
            y = spmv(lap, indicator(n, omega))
            removed = select_removal_set(lap, omega, y, gamma=0.2)
            hits += removed.issubset(block)
        assert hits >= 0.9 * trials


class TestClusterPursuit:
    def test_two_triangle_exact_recovery(self, two_triangles):
        result = cluster_pursuit(
            two_triangles, IndexSet([0, 1, 2, 3]), PursuitParams(gamma=0.25, reject=0.5)
        )
        assert list(result.cluster) == [0, 1, 2]
        assert list(result.removed) == [0]
        assert np.allclose(result.solution, [0.0, 0.0, 1.0], atol=1e-8)

    def test_omega_equals_component(self, two_triangles):
        # y = 0, solution 0, nothing rejected
        result = cluster_pursuit(
            two_triangles, IndexSet([3, 4, 5]), PursuitParams(gamma=0.3, reject=0.5)
        )
        assert list(result.cluster) == [3, 4, 5]

    def test_cluster_contains_removed_and_stays_in_omega(self):
        children = np.random.SeedSequence(555).spawn(10)
        for child in children:
            g_seed, s_seed = child.spawn(2)
            graph, truth = ssbm(300, 3, 0.3, 0.03, rng_seed=int(g_seed.generate_state(1)[0]))
            rng = np.random.Generator(np.random.PCG64(s_seed))
            omega = IndexSet(rng.choice(300, 150, replace=False))
            result = cluster_pursuit(graph, omega, PursuitParams(0.2, 0.5))
            assert result.removed.issubset(result.cluster)
            assert result.cluster.issubset(omega)

    def test_scale_invariance(self, bridged_triangles):
        omega = IndexSet([0, 1, 2, 3])
        a = cluster_pursuit(bridged_triangles, omega, PursuitParams(0.25, 0.5))
        scaled = Graph(
            type(bridged_triangles.adjacency)(
                6, 6,
                bridged_triangles.adjacency.row_ptr,
                bridged_triangles.adjacency.col_idx,
                bridged_triangles.adjacency.values * 7.5,
            )
        )
        b = cluster_pursuit(scaled, omega, PursuitParams(0.25, 0.5))
        assert a.cluster == b.cluster
        assert np.allclose(a.solution, b.solution, atol=1e-12)

    def test_empty_omega_rejected(self, two_triangles):
        with pytest.raises(EmptyOmegaError):
            cluster_pursuit(two_triangles, IndexSet.empty(), PursuitParams(0.2, 0.5))

    def test_singleton_omega_rejected(self, two_triangles):
        with pytest.raises(EmptyOmegaError):
            cluster_pursuit(two_triangles, IndexSet([0]), PursuitParams(0.2, 0.5))

    def test_monte_carlo_recovery_error(self):
        """Extraction error (symmetric difference over block size) should be
        <= 0.15 in >= 90% of draws with candidates from the random walk."""
        trials = 60
        hits = 0
        children = np.random.SeedSequence(777002).spawn(trials)
        n = 600
        p, q = 8 * np.log(n) / n, np.log(n) / n
        for child in children:
            g_seed, s_seed = child.spawn(2)
            graph, truth = ssbm(n, 3, p, q, rng_seed=int(g_seed.generate_state(1)[0]))
            block = truth.block(0)
            rng = np.random.Generator(np.random.PCG64(s_seed))
            seeds = IndexSet(rng.choice(block.indices, 3, replace=False))
            omega = random_walk_threshold(graph, seeds, RandomWalkParams(0.6, 3, 200))
            result = cluster_pursuit(graph, omega, PursuitParams(0.2, 0.5))
            hits += sym_diff_ratio(result.cluster, block) <= 0.15
        assert hits >= 0.9 * trials


class TestUnperturbedExactness:
    def test_indicator_is_exact_solution(self, two_triangles):
        """When the target block is a full component, the 0/1 vector marking
        the non-members of the candidate set solves the system exactly."""
        lap = rw_laplacian(two_triangles)
        omega = IndexSet([0, 1, 2, 3, 4])
        removed = IndexSet([0, 2])
        cols = omega.difference(removed)
        y = spmv(lap, indicator(6, omega))
        x = np.array([0.0, 1.0, 1.0])  # columns (1, 3, 4): zero on block, one outside
        sub = column_submatrix(lap, cols)
        assert np.linalg.norm(spmv(sub, x) - y) <= 1e-12

    def test_exactness_on_disconnected_blocks(self):
        graph, truth = ssbm(120, 3, 0.5, 0.0, rng_seed=5)
        block = truth.block(0)
        rng = np.random.default_rng(9)
        outside = np.setdiff1d(np.arange(120), block.indices)
        omega = IndexSet(np.concatenate([block.indices, rng.choice(outside, 15, replace=False)]))
        removed = IndexSet(rng.choice(block.indices, 10, replace=False))
        cols = omega.difference(removed)
        lap = rw_laplacian(graph)
        y = spmv(lap, indicator(120, omega))
        x = np.isin(cols.indices, outside).astype(float)
        assert np.linalg.norm(spmv(column_submatrix(lap, cols), x) - y) <= 1e-10


def test_conditioning_of_pruned_columns():
    """Sampled per the well-conditioned regime: |T| = ceil(3 n1/4) removed
    from the target block, candidate set = block plus ceil(n1/2) outsiders;
    the normal-matrix condition number should be <= 5 in >= 95% of draws."""
    trials = 40
    n1 = 200
    hits = 0
    children = np.random.SeedSequence(777003).spawn(trials)
    n = 600
    p = 8 * np.log(n) / n
    for child in children:
        g_seed, s_seed = child.spawn(2)
        graph, truth = ssbm(n, 3, p, 0.0, rng_seed=int(g_seed.generate_state(1)[0]))
        block = truth.block(0)
        rng = np.random.Generator(np.random.PCG64(s_seed))
        removed = rng.choice(block.indices, int(np.ceil(3 * n1 / 4)), replace=False)
        outside = np.setdiff1d(np.arange(n), block.indices)
        extra = rng.choice(outside, int(np.ceil(n1 / 2)), replace=False)
        omega = IndexSet(np.concatenate([block.indices, extra]))
        cols = omega.difference(IndexSet(removed))
        lap = rw_laplacian(graph)
        hits += cond_normal(column_submatrix(lap, cols)) <= 5.0
    assert hits >= 0.95 * trials
