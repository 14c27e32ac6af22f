"""Seeded local cluster extraction on graphs.

Grow a candidate vertex set around a few labeled seeds with a short random
walk, then prune it by thresholding an iterative least-squares solve on the
random-walk Laplacian restricted to the candidate columns. Includes block
model generators, K-NN affinity graph construction, evaluation metrics, and a
reproducible experiment driver.
"""

from ._version import __version__
from .clustering import UNASSIGNED, ClusterLabeling, ExtractionParams, ilsc, lsc
from .errors import (
    AmbiguousIdentityError,
    ClusteringWarning,
    DimensionError,
    EmptyOmegaError,
    EmptySeedError,
    IsolatedVertexError,
    LsclustError,
    ParseError,
    RankDeficientError,
    SeedConsumedError,
    UndefinedMetricError,
)
from .knn_graph import PointCloud, graph_from_points, knn_affinity, symmetrize
from .metrics import (
    EvalReport,
    accuracy,
    evaluate_extraction,
    evaluate_partition,
    f1,
    jaccard,
    sym_diff_ratio,
)
from .models import GroundTruth, SbmSpec, epsilon_stats, generate_sbm, split_laplacian, ssbm
from .pursuit import PursuitParams, PursuitResult, cluster_pursuit, select_removal_set
from .random_walk import RandomWalkParams, random_walk_threshold, top_s
from .sparse_core import (
    Graph,
    IndexSet,
    LsqrResult,
    SparseMatrix,
    abs_matvec_T,
    column_submatrix,
    cond_normal,
    indicator,
    lsqr,
    rw_laplacian,
    spmv,
    transition_matrix,
    transpose,
)

__all__ = [
    "__version__",
    "AmbiguousIdentityError",
    "ClusterLabeling",
    "ClusteringWarning",
    "DimensionError",
    "EmptyOmegaError",
    "EmptySeedError",
    "EvalReport",
    "ExtractionParams",
    "Graph",
    "GroundTruth",
    "IndexSet",
    "IsolatedVertexError",
    "LsclustError",
    "LsqrResult",
    "ParseError",
    "PointCloud",
    "PursuitParams",
    "PursuitResult",
    "RandomWalkParams",
    "RankDeficientError",
    "SbmSpec",
    "SeedConsumedError",
    "SparseMatrix",
    "UNASSIGNED",
    "UndefinedMetricError",
    "abs_matvec_T",
    "accuracy",
    "cluster_pursuit",
    "column_submatrix",
    "cond_normal",
    "epsilon_stats",
    "evaluate_extraction",
    "evaluate_partition",
    "f1",
    "generate_sbm",
    "graph_from_points",
    "ilsc",
    "indicator",
    "jaccard",
    "knn_affinity",
    "lsc",
    "lsqr",
    "random_walk_threshold",
    "rw_laplacian",
    "select_removal_set",
    "split_laplacian",
    "spmv",
    "ssbm",
    "sym_diff_ratio",
    "symmetrize",
    "top_s",
    "transition_matrix",
    "transpose",
]
