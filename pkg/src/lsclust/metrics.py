"""Evaluation of extracted clusters against ground truth.

``sym_diff_ratio`` normalizes by the reference set, so unlike the Jaccard
index it is not symmetric in its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clustering import UNASSIGNED, ClusterLabeling
from .errors import AmbiguousIdentityError, UndefinedMetricError
from .models import GroundTruth
from .sparse_core import IndexSet


@dataclass(frozen=True)
class EvalReport:
    """Headline rates plus the per-cluster breakdown for partition runs."""

    jaccard: float = float("nan")
    f1: float = float("nan")
    precision: float = float("nan")
    recall: float = float("nan")
    sym_diff_ratio: float = float("nan")
    accuracy: float = float("nan")
    misclassified_count: int = -1
    per_cluster: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "jaccard": self.jaccard,
            "f1": self.f1,
            "precision": self.precision,
            "recall": self.recall,
            "sym_diff_ratio": self.sym_diff_ratio,
            "accuracy": self.accuracy,
            "misclassified_count": self.misclassified_count,
            "per_cluster": list(self.per_cluster),
        }


def jaccard(pred: IndexSet, truth: IndexSet) -> float:
    """|intersection| / |union|; 1.0 when both sets are empty."""
    union = len(pred.union(truth))
    if union == 0:
        return 1.0
    return len(pred.intersection(truth)) / union


def f1(pred: IndexSet, truth: IndexSet) -> tuple[float, float, float]:
    """(f1, precision, recall) against a non-empty reference set."""
    if len(truth) == 0:
        raise UndefinedMetricError("F1 is undefined for an empty reference set")
    hits = len(pred.intersection(truth))
    precision = hits / len(pred) if len(pred) else 0.0
    recall = hits / len(truth)
    score = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return score, precision, recall


def sym_diff_ratio(pred: IndexSet, truth: IndexSet) -> float:
    """|pred symmetric-difference truth| / |truth|."""
    if len(truth) == 0:
        raise UndefinedMetricError("symmetric-difference ratio needs a non-empty reference")
    sym = len(pred.union(truth)) - len(pred.intersection(truth))
    return sym / len(truth)


def _seed_identity(labeling: ClusterLabeling, truth: GroundTruth) -> np.ndarray:
    """True block of each cluster, read off its seed set."""
    identities = np.empty(len(labeling.seed_sets), dtype=np.int64)
    for i, seeds in enumerate(labeling.seed_sets):
        blocks = np.unique(truth.labels[seeds.indices])
        if blocks.size != 1:
            raise AmbiguousIdentityError(
                f"seed set {i} spans blocks {blocks.tolist()}; cluster identity is ambiguous"
            )
        identities[i] = blocks[0]
    return identities


def accuracy(labeling: ClusterLabeling, truth: GroundTruth) -> tuple[float, int]:
    """Fraction of vertices whose assigned cluster has the same identity as
    their true block; unassigned vertices count as misclassified. Cluster
    identity comes from the seed set each cluster grew from."""
    identities = _seed_identity(labeling, truth)
    assigned = labeling.assignments != UNASSIGNED
    correct = np.zeros(truth.n, dtype=bool)
    correct[assigned] = identities[labeling.assignments[assigned]] == truth.labels[assigned]
    miscount = int(truth.n - correct.sum())
    return (truth.n - miscount) / truth.n, miscount


def evaluate_extraction(pred: IndexSet, truth_set: IndexSet) -> EvalReport:
    """Single-cluster metrics against the true member set."""
    score, precision, recall = f1(pred, truth_set)
    return EvalReport(
        jaccard=jaccard(pred, truth_set),
        f1=score,
        precision=precision,
        recall=recall,
        sym_diff_ratio=sym_diff_ratio(pred, truth_set),
    )


def evaluate_partition(
    labeling: ClusterLabeling, truth: GroundTruth, average: str = "macro"
) -> EvalReport:
    """Partition metrics: accuracy over all vertices plus per-cluster rates.

    ``macro`` averages the per-cluster F1/Jaccard values; ``micro`` pools the
    pairwise counts over clusters before forming the rates.
    """
    if average not in ("macro", "micro"):
        raise ValueError(f"unknown average mode {average!r}")
    identities = _seed_identity(labeling, truth)
    per_cluster = []
    hit_sum = pred_sum = truth_sum = union_sum = inter_sum = sym_sum = 0
    for i, cluster in enumerate(labeling.clusters):
        block = truth.block(int(identities[i]))
        score, precision, recall = f1(cluster, block)
        report = {
            "cluster": i,
            "jaccard": jaccard(cluster, block),
            "f1": score,
            "precision": precision,
            "recall": recall,
            "sym_diff_ratio": sym_diff_ratio(cluster, block),
            "size": len(cluster),
            "true_size": len(block),
        }
        per_cluster.append(report)
        hits = len(cluster.intersection(block))
        hit_sum += hits
        pred_sum += len(cluster)
        truth_sum += len(block)
        inter_sum += hits
        union_sum += len(cluster.union(block))
        sym_sum += len(cluster.union(block)) - hits
    if average == "macro":
        mean_j = float(np.mean([c["jaccard"] for c in per_cluster]))
        mean_f1 = float(np.mean([c["f1"] for c in per_cluster]))
        mean_p = float(np.mean([c["precision"] for c in per_cluster]))
        mean_r = float(np.mean([c["recall"] for c in per_cluster]))
        mean_sd = float(np.mean([c["sym_diff_ratio"] for c in per_cluster]))
    else:
        mean_p = hit_sum / pred_sum if pred_sum else 0.0
        mean_r = hit_sum / truth_sum if truth_sum else 0.0
        mean_f1 = 2 * mean_p * mean_r / (mean_p + mean_r) if mean_p + mean_r > 0 else 0.0
        mean_j = inter_sum / union_sum if union_sum else 1.0
        mean_sd = sym_sum / truth_sum if truth_sum else 0.0
    acc, miscount = accuracy(labeling, truth)
    return EvalReport(
        jaccard=mean_j,
        f1=mean_f1,
        precision=mean_p,
        recall=mean_r,
        sym_diff_ratio=mean_sd,
        accuracy=acc,
        misclassified_count=miscount,
        per_cluster=per_cluster,
    )
