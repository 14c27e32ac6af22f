import numpy as np
import pytest

import oracles
from lsclust import (
    ClusteringWarning,
    Graph,
    PointCloud,
    SparseMatrix,
    graph_from_points,
    knn_affinity,
    symmetrize,
    transpose,
)


class TestKnnAffinity:
    def test_two_points(self):
        cloud = PointCloud(np.array([[0.0], [2.0]]))
        a = knn_affinity(cloud, k=1, r=1).to_dense()
        assert a[0, 1] == pytest.approx(np.exp(-1.0))
        assert a[1, 0] == pytest.approx(np.exp(-1.0))

    def test_three_collinear_points(self):
        cloud = PointCloud(np.array([[0.0], [1.0], [3.0]]))
        a = knn_affinity(cloud, k=2, r=1).to_dense()
        # scales: sigma = (1, 1, 2) -- distance to nearest neighbor
        assert a[0, 1] == pytest.approx(np.exp(-1.0))
        assert a[0, 2] == pytest.approx(np.exp(-9.0 / 2.0))
        assert a[1, 0] == pytest.approx(np.exp(-1.0))
        assert a[1, 2] == pytest.approx(np.exp(-4.0 / 2.0))
        assert a[2, 1] == pytest.approx(np.exp(-4.0 / 2.0))
        assert a[2, 0] == pytest.approx(np.exp(-9.0 / 2.0))

    def test_row_fill_and_range(self):
        rng = np.random.default_rng(5)
        cloud = PointCloud(rng.standard_normal((40, 3)))
        a = knn_affinity(cloud, k=7, r=4)
        assert np.array_equal(np.diff(a.row_ptr), np.full(40, 7))
        assert np.all(a.values > 0) and np.all(a.values <= 1.0)

    def test_neighbors_match_brute_force(self):
        rng = np.random.default_rng(6)
        points = rng.standard_normal((60, 4))
        a = knn_affinity(PointCloud(points), k=5, r=3)
        expected = oracles.brute_knn(points, 5)
        for i in range(60):
            got = sorted(a.col_idx[a.row_ptr[i]:a.row_ptr[i + 1]].tolist())
            assert got == sorted(expected[i])

    def test_monotone_in_distance(self):
        # fixed scales: farther neighbors get smaller affinities
        cloud = PointCloud(np.array([[0.0], [1.0], [2.5], [4.5]]))
        a = knn_affinity(cloud, k=3, r=1).to_dense()
        row = a[0]
        assert row[1] > row[2] > row[3] > 0

    def test_duplicate_points_floor_scale(self):
        cloud = PointCloud(np.array([[0.0], [0.0], [5.0]]))
        with pytest.warns(ClusteringWarning):
            a = knn_affinity(cloud, k=1, r=1)
        assert np.all(np.isfinite(a.values))
        assert a.to_dense()[0, 1] == 1.0  # zero distance, affinity e^0

    def test_parameter_validation(self):
        cloud = PointCloud(np.zeros((5, 2)))
        with pytest.raises(ValueError):
            knn_affinity(cloud, k=5, r=1)  # k must be < m
        with pytest.raises(ValueError):
            knn_affinity(cloud, k=2, r=3)  # r must be <= k


class TestSymmetrize:
    def test_max_idempotent_on_symmetric(self):
        m = SparseMatrix.from_dense([[0.0, 0.3, 0.0], [0.3, 0.0, 0.7], [0.0, 0.7, 0.0]])
        assert symmetrize(m, "max") == m

    def test_average_elementwise(self):
        m = SparseMatrix.from_dense([[0.0, 1.0], [0.0, 0.0]])
        assert symmetrize(m, "average").to_dense().tolist() == [[0.0, 0.5], [0.5, 0.0]]

    def test_max_elementwise(self):
        m = SparseMatrix.from_dense([[0.0, 1.0, 0.2], [0.4, 0.0, 0.0], [0.0, 0.0, 0.0]])
        out = symmetrize(m, "max").to_dense()
        assert out[0, 1] == 1.0 and out[1, 0] == 1.0
        assert out[0, 2] == 0.2 and out[2, 0] == 0.2

    def test_product_matches_dense_oracle(self):
        cloud = PointCloud(np.array([[0.0], [1.0], [3.0]]))
        a = knn_affinity(cloud, k=2, r=1)
        got = symmetrize(a, "product").to_dense()
        want = a.to_dense().T @ a.to_dense()
        np.fill_diagonal(want, 0.0)
        assert np.allclose(got, want, atol=1e-15)

    def test_product_random_vs_dense(self):
        rng = np.random.default_rng(8)
        dense = np.where(rng.random((12, 12)) < 0.3, rng.random((12, 12)), 0.0)
        np.fill_diagonal(dense, 0.0)
        m = SparseMatrix.from_dense(dense)
        got = symmetrize(m, "product").to_dense()
        want = dense.T @ dense
        np.fill_diagonal(want, 0.0)
        assert np.allclose(got, want, atol=1e-14)

    def test_output_is_bit_equal_symmetric(self):
        rng = np.random.default_rng(9)
        cloud = PointCloud(rng.standard_normal((30, 2)))
        a = knn_affinity(cloud, k=4, r=2)
        for mode in ("product", "max", "average"):
            out = symmetrize(a, mode)
            assert transpose(out) == out  # exact structural equality

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            symmetrize(SparseMatrix.identity(2), "geometric-mean")


def test_graph_from_points_satisfies_graph_invariants():
    rng = np.random.default_rng(10)
    points = np.concatenate([rng.standard_normal((20, 2)), rng.standard_normal((20, 2)) + 8.0])
    # product mode may isolate points that appear in nobody's neighbor list;
    # max keeps every outgoing edge, so degrees stay positive
    g = graph_from_points(PointCloud(points), k=5, r=3, mode="max")
    assert isinstance(g, Graph)
    assert g.n == 40
    assert np.all(g.degrees > 0)
    g_prod = graph_from_points(PointCloud(points), k=5, r=3, mode="product")
    assert isinstance(g_prod, Graph)  # constructor enforces the invariants


def test_point_cloud_validation():
    with pytest.raises(ValueError):
        PointCloud(np.array([1.0, 2.0]))  # not 2-d
    with pytest.raises(ValueError):
        PointCloud(np.array([[np.inf, 0.0]]))
