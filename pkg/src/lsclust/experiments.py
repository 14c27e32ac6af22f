"""Seeded experiment sweeps and runtime benchmarks over block-model graphs.

All randomness descends from one master seed: trial (i, j) of a sweep uses
child ``i * trials + j`` of ``SeedSequence(master_seed)``, from which the
graph seed and the seed-sampling stream are derived. Timing covers the
extraction call only; graph generation and I/O are excluded.
"""

from __future__ import annotations

import csv
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .clustering import ExtractionParams, ilsc, lsc
from .errors import LsclustError
from .metrics import evaluate_extraction, evaluate_partition
from .models import ssbm
from .pursuit import PursuitParams
from .random_walk import RandomWalkParams
from .sparse_core import IndexSet

SWEEP_COLUMNS = ("n", "trial", "jaccard", "f1", "accuracy", "sym_diff_ratio", "time_ms")


def default_p(n: int) -> float:
    """Intra-block edge probability of the standard test family."""
    return 8.0 * math.log(n) / n


def default_q(n: int) -> float:
    """Inter-block edge probability of the standard test family."""
    return math.log(n) / n


@dataclass
class SweepConfig:
    """Experiment grid over graph sizes with repeated seeded trials."""

    n_values: tuple[int, ...]
    reject: float
    mode: str = "lsc"  # or "ilsc"
    k: int = 3
    trials: int = 500
    p: float | None = None  # None: 8 ln(n) / n
    q: float | None = None  # None: ln(n) / n
    seeds_per_cluster: int = 3
    seeds_frac: float | None = None  # overrides seeds_per_cluster when set
    delta: float = 0.6
    t: int = 3
    gamma: float = 0.2
    n_hat: int | None = None  # None: true block size
    max_iter: int = 1
    remainder: str = "unassigned"
    target_block: int = 0
    master_seed: int = 0
    tol: float = 1e-6
    solver_max_iter: int = 1000

    def __post_init__(self):
        self.n_values = tuple(int(n) for n in self.n_values)
        if self.mode not in ("lsc", "ilsc"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def extraction_params(config: SweepConfig, n_hat: int) -> ExtractionParams:
    return ExtractionParams(
        rw=RandomWalkParams(delta=config.delta, t=config.t, n_hat=n_hat),
        pursuit=PursuitParams(gamma=config.gamma, reject=config.reject),
        max_iter=config.max_iter,
    )


def _seed_count(config: SweepConfig, block_size: int) -> int:
    if config.seeds_frac is not None:
        return max(1, int(round(config.seeds_frac * block_size)))
    return config.seeds_per_cluster


def run_trial(config: SweepConfig, n: int, trial: int, child_seq) -> dict:
    """One sweep cell. Returns a row dict; failures produce an error row."""
    graph_seq, sample_seq = child_seq.spawn(2)
    graph_seed = int(graph_seq.generate_state(1, dtype=np.uint64)[0])
    row = {"n": n, "trial": trial, "jaccard": math.nan, "f1": math.nan,
           "accuracy": math.nan, "sym_diff_ratio": math.nan, "time_ms": math.nan,
           "error": ""}
    try:
        p = config.p if config.p is not None else default_p(n)
        q = config.q if config.q is not None else default_q(n)
        graph, truth = ssbm(n, config.k, p, q, rng_seed=graph_seed)
        rng = np.random.Generator(np.random.PCG64(sample_seq))
        if config.mode == "lsc":
            block = truth.block(config.target_block)
            n_hat = config.n_hat if config.n_hat is not None else len(block)
            count = min(_seed_count(config, len(block)), len(block))
            seeds = IndexSet(rng.choice(block.indices, size=count, replace=False))
            params = extraction_params(config, n_hat)
            start = time.perf_counter()
            result = lsc(graph, seeds, params, tol=config.tol,
                         solver_max_iter=config.solver_max_iter)
            elapsed = time.perf_counter() - start
            report = evaluate_extraction(result.cluster, block)
        else:
            seed_sets = []
            n_hats = []
            for b in range(config.k):
                block = truth.block(b)
                count = min(_seed_count(config, len(block)), len(block))
                seed_sets.append(IndexSet(rng.choice(block.indices, size=count, replace=False)))
                n_hats.append(config.n_hat if config.n_hat is not None else len(block))
            params = extraction_params(config, n_hats[0])
            start = time.perf_counter()
            labeling = ilsc(graph, seed_sets, n_hats, params, remainder=config.remainder,
                            tol=config.tol, solver_max_iter=config.solver_max_iter)
            elapsed = time.perf_counter() - start
            report = evaluate_partition(labeling, truth)
        row.update(
            jaccard=report.jaccard,
            f1=report.f1,
            accuracy=report.accuracy,
            sym_diff_ratio=report.sym_diff_ratio,
            time_ms=elapsed * 1000.0,
        )
    except LsclustError as exc:
        row["error"] = str(exc)
        print(f"trial n={n} #{trial} failed: {exc}", file=sys.stderr)
    return row


def run_sweep(config: SweepConfig, progress: bool = False) -> tuple[list[dict], list[dict]]:
    """Run the full grid; returns (per-trial rows, aggregate rows).

    Aggregates carry ``trial`` = ``"mean"`` / ``"std"`` per graph size and
    ignore error rows (their metric cells are NaN).
    """
    root = np.random.SeedSequence(config.master_seed)
    children = root.spawn(len(config.n_values) * config.trials)
    rows = []
    for i, n in enumerate(config.n_values):
        for trial in range(config.trials):
            rows.append(run_trial(config, n, trial, children[i * config.trials + trial]))
            if progress and (trial + 1) % 100 == 0:
                print(f"n={n}: {trial + 1}/{config.trials} trials", file=sys.stderr)
    aggregates = aggregate_rows(config, rows)
    return rows, aggregates


def aggregate_rows(config: SweepConfig, rows: list[dict]) -> list[dict]:
    out = []
    for n in config.n_values:
        cells = [r for r in rows if r["n"] == n]
        for stat, fn in (("mean", np.nanmean), ("std", np.nanstd)):
            agg = {"n": n, "trial": stat, "error": ""}
            for col in ("jaccard", "f1", "accuracy", "sym_diff_ratio", "time_ms"):
                values = np.asarray([c[col] for c in cells])
                agg[col] = float(fn(values)) if not np.all(np.isnan(values)) else math.nan
            out.append(agg)
    return out


def write_sweep_csv(rows: list[dict], aggregates: list[dict], path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in list(rows) + list(aggregates):
            writer.writerow([_cell(row[c]) for c in SWEEP_COLUMNS])


def _cell(value):
    if isinstance(value, float) and math.isnan(value):
        return ""
    return value


@dataclass
class BenchConfig:
    """Runtime-scaling benchmark of single-cluster extraction."""

    n_values: tuple[int, ...] = (600, 1200, 2400, 4800, 9600)
    reject: float = 0.5
    k: int = 3
    reps: int = 7
    seeds_per_cluster: int = 3
    delta: float = 0.6
    t: int = 3
    gamma: float = 0.2
    max_iter: int = 1
    master_seed: int = 0


def run_bench(config: BenchConfig) -> tuple[list[dict], float]:
    """Time extraction across graph sizes; returns (rows, log-log slope).

    Each size is measured on ``reps`` freshly drawn instances and summarized
    by the minimum wall time, which rejects scheduler interference and so
    reflects the algorithm's own scaling; the mean is reported alongside.
    The slope is a least-squares fit of log(min time) against log(n).
    """
    root = np.random.SeedSequence(config.master_seed)
    children = root.spawn(len(config.n_values) * config.reps)
    sweep = SweepConfig(
        n_values=config.n_values, reject=config.reject, mode="lsc", k=config.k,
        trials=config.reps, seeds_per_cluster=config.seeds_per_cluster,
        delta=config.delta, t=config.t, gamma=config.gamma, max_iter=config.max_iter,
        master_seed=config.master_seed,
    )
    rows = []
    for i, n in enumerate(config.n_values):
        times = []
        for rep in range(config.reps):
            child = children[i * config.reps + rep]
            graph_seq, sample_seq = child.spawn(2)
            graph_seed = int(graph_seq.generate_state(1, dtype=np.uint64)[0])
            graph, truth = ssbm(n, config.k, default_p(n), default_q(n), rng_seed=graph_seed)
            block = truth.block(0)
            rng = np.random.Generator(np.random.PCG64(sample_seq))
            seeds = IndexSet(rng.choice(block.indices, config.seeds_per_cluster, replace=False))
            params = extraction_params(sweep, len(block))
            start = time.perf_counter()
            lsc(graph, seeds, params)
            times.append((time.perf_counter() - start) * 1000.0)
        rows.append({
            "n": int(n),
            "min_time_ms": float(np.min(times)),
            "mean_time_ms": float(np.mean(times)),
            "reps": config.reps,
        })
    sizes = np.asarray([r["n"] for r in rows], dtype=np.float64)
    times = np.asarray([r["min_time_ms"] for r in rows])
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    return rows, slope
