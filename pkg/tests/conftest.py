import numpy as np
import pytest

from lsclust import Graph


@pytest.fixture
def triangle():
    """K3 with unit weights."""
    return Graph.from_edges(3, [0, 0, 1], [1, 2, 2])


@pytest.fixture
def two_triangles():
    """Two disjoint triangles: {0,1,2} and {3,4,5}."""
    return Graph.from_edges(6, [0, 0, 1, 3, 3, 4], [1, 2, 2, 4, 5, 5])


@pytest.fixture
def bridged_triangles():
    """Two triangles joined by the single edge 2-3."""
    return Graph.from_edges(6, [0, 0, 1, 3, 3, 4, 2], [1, 2, 2, 4, 5, 5, 3])


@pytest.fixture
def path3():
    """Path graph 0-1-2."""
    return Graph.from_edges(3, [0, 1], [1, 2])


def random_csr(rng, n_rows, n_cols, density=0.3):
    """Random sparse matrix for oracle comparisons."""
    from lsclust import SparseMatrix

    mask = rng.random((n_rows, n_cols)) < density
    dense = np.where(mask, rng.standard_normal((n_rows, n_cols)), 0.0)
    return SparseMatrix.from_dense(dense), dense
