"""File formats: whitespace edge lists, label files, dense CSV point clouds,
seed files, and the JSON/CSV trial report.

Edge list: one ``u v [w]`` line per undirected edge, 0-based ids, default
weight 1; ``#`` starts a comment; duplicate edges sum their weights;
self-loops are rejected. The writer emits a ``# vertices: N`` header (so
trailing isolated vertices survive a round trip) and one canonical
``u v w`` line per edge with u < v, sorted.

Label file: one ``vertex label`` line per vertex, covering 0..n-1 exactly.
Seed file: one ``vertex [cluster]`` line per seed; cluster defaults to 0.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import DimensionError, ParseError
from .knn_graph import PointCloud
from .metrics import EvalReport
from .models import GroundTruth
from .sparse_core import Graph, IndexSet


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def read_edge_list(path) -> Graph:
    """Parse an undirected weighted edge list."""
    us, vs, ws = [], [], []
    declared_n = None
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    if first.startswith("# vertices:"):
        try:
            declared_n = int(first.split(":", 1)[1])
        except ValueError:
            raise ParseError("malformed vertex-count header", path=path, line=1)
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {line!r}", path=path, line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", path=path, line=lineno)
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {line!r}", path=path, line=lineno)
        if u == v:
            raise ParseError(f"self-loop on vertex {u}", path=path, line=lineno)
        us.append(u)
        vs.append(v)
        ws.append(w)
    n_seen = max(max(us, default=-1), max(vs, default=-1)) + 1
    n = declared_n if declared_n is not None else n_seen
    if n < n_seen:
        raise ParseError(f"edge references vertex >= declared count {n}", path=path)
    return Graph.from_edges(n, us, vs, ws)


def write_edge_list(g: Graph, path):
    """Write the canonical edge list (header, then sorted u < v lines)."""
    a = g.adjacency
    counts = np.diff(a.row_ptr)
    rows = np.repeat(np.arange(g.n), counts)
    upper = rows < a.col_idx
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# vertices: {g.n}\n")
        for u, v, w in zip(rows[upper].tolist(), a.col_idx[upper].tolist(),
                           a.values[upper].tolist()):
            fh.write(f"{u} {v} {w!r}\n")


def read_labels(path, n: int | None = None) -> GroundTruth:
    """Parse a label file; ids must cover 0..n-1 exactly once."""
    pairs = {}
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'vertex label', got {line!r}", path=path, line=lineno)
        try:
            vertex, label = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", path=path, line=lineno)
        if vertex in pairs:
            raise ParseError(f"duplicate vertex {vertex}", path=path, line=lineno)
        pairs[vertex] = label
    if not pairs:
        raise DimensionError(f"label file {path} is empty")
    count = len(pairs)
    if n is not None and count != n:
        raise DimensionError(f"label file covers {count} vertices, expected {n}")
    if set(pairs) != set(range(count)):
        raise ParseError("vertex ids must cover 0..n-1 exactly once", path=path)
    return GroundTruth([pairs[i] for i in range(count)])


def write_labels(labels: np.ndarray, path):
    with open(path, "w", encoding="utf-8") as fh:
        for vertex, label in enumerate(np.asarray(labels).tolist()):
            fh.write(f"{vertex} {label}\n")


def read_seed_sets(path) -> list[IndexSet]:
    """Parse ``vertex [cluster]`` lines into per-cluster seed sets."""
    groups: dict[int, list[int]] = {}
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) not in (1, 2):
            raise ParseError(f"expected 'vertex [cluster]', got {line!r}", path=path, line=lineno)
        try:
            vertex = int(parts[0])
            cluster = int(parts[1]) if len(parts) == 2 else 0
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", path=path, line=lineno)
        groups.setdefault(cluster, []).append(vertex)
    if not groups:
        raise ParseError("seed file is empty", path=path)
    if set(groups) != set(range(len(groups))):
        raise ParseError("cluster ids must cover 0..k-1", path=path)
    return [IndexSet(groups[i]) for i in range(len(groups))]


def write_index_set(s: IndexSet, path):
    with open(path, "w", encoding="utf-8") as fh:
        for v in s:
            fh.write(f"{v}\n")


def read_index_set(path) -> IndexSet:
    out = []
    for lineno, line in _data_lines(path):
        try:
            out.append(int(line.split()[0]))
        except ValueError:
            raise ParseError(f"non-integer vertex id {line!r}", path=path, line=lineno)
    return IndexSet(out)


def read_points_csv(path) -> PointCloud:
    """Dense point matrix, one comma-separated row per point."""
    rows = []
    width = None
    for lineno, line in _data_lines(path):
        try:
            row = [float(f) for f in line.split(",")]
        except ValueError:
            raise ParseError(f"non-numeric field in row {line!r}", path=path, line=lineno)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"row has {len(row)} fields, expected {width}", path=path, line=lineno)
        rows.append(row)
    if not rows:
        raise ParseError("point file is empty", path=path)
    return PointCloud(np.asarray(rows))


def write_points_csv(cloud: PointCloud, path):
    with open(path, "w", encoding="utf-8") as fh:
        for row in cloud.data:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


REPORT_SCHEMA_VERSION = 1


@dataclass
class TrialReport:
    """One algorithm run: parameter echo, metrics, timing, and provenance.

    Serializes to JSON with the stable top-level fields
    ``{params, metrics, wall_time_ms, seed, version}``; solver diagnostics
    ride along under ``metrics["solver"]``.
    """

    params: dict
    metrics: EvalReport
    wall_time_ms: float
    seed: int | None = None
    solver: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        body = self.metrics.to_dict()
        body["solver"] = dict(self.solver)
        return {
            "params": dict(self.params),
            "metrics": body,
            "wall_time_ms": self.wall_time_ms,
            "seed": self.seed,
            "version": {"package": __version__, "schema": REPORT_SCHEMA_VERSION},
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "TrialReport":
        body = dict(payload["metrics"])
        solver = body.pop("solver", {})
        return cls(
            params=dict(payload["params"]),
            metrics=EvalReport(**body),
            wall_time_ms=payload["wall_time_ms"],
            seed=payload["seed"],
            solver=solver,
        )


def write_report(report: TrialReport, path, format: str = "json"):
    """Serialize a trial report; ``format`` is ``json`` or ``csv``."""
    path = Path(path)
    if format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    elif format == "csv":
        m = report.metrics
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["jaccard", "f1", "precision", "recall", "sym_diff_ratio", "accuracy",
                 "misclassified_count", "wall_time_ms", "seed"]
            )
            writer.writerow(
                [m.jaccard, m.f1, m.precision, m.recall, m.sym_diff_ratio, m.accuracy,
                 m.misclassified_count, report.wall_time_ms, report.seed]
            )
    else:
        raise ValueError(f"unknown report format {format!r}")


def read_report(path) -> TrialReport:
    with open(path, "r", encoding="utf-8") as fh:
        return TrialReport.from_json_dict(json.load(fh))
