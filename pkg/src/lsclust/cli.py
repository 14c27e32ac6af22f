"""Command-line interface.

Subcommands: ``gen-sbm`` (draw a block-model graph), ``build-knn`` (affinity
graph from points), ``extract`` (single cluster), ``partition`` (all
clusters), ``eval`` (score saved results), ``sweep`` (repeated seeded
experiment grid), ``bench`` (runtime scaling).

Exit codes: 0 success, 1 usage error, 2 data/computation error.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import io as lio
from ._version import __version__
from .clustering import ilsc, lsc
from .errors import LsclustError
from .experiments import (
    BenchConfig,
    SweepConfig,
    default_p,
    default_q,
    extraction_params,
    run_bench,
    run_sweep,
    write_sweep_csv,
)
from .knn_graph import PRESETS, PointCloud, graph_from_points
from .metrics import evaluate_extraction, evaluate_partition
from .models import GroundTruth, SbmSpec, generate_sbm, ssbm
from .sparse_core import Graph, IndexSet


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_extraction_flags(p: argparse.ArgumentParser, need_reject=True):
    p.add_argument("--delta", type=float, default=0.6, help="diffusion over-selection factor")
    p.add_argument("--depth", type=int, default=3, help="random walk depth")
    p.add_argument("--gamma", type=float, default=0.2, help="fraction of candidate columns removed")
    p.add_argument("--reject", type=float, required=need_reject,
                   help="rejection threshold on least-squares entries")
    p.add_argument("--max-iter", type=int, default=1, help="diffusion/pursuit rounds")


def build_parser() -> _Parser:
    parser = _Parser(prog="lsclust", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"lsclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-sbm", help="draw a stochastic block model graph")
    p.add_argument("--n", type=int, help="total vertices (with --k equal-size blocks)")
    p.add_argument("--k", type=int, default=3, help="number of blocks")
    p.add_argument("--sizes", type=_int_list, help="explicit block sizes (overrides --n/--k)")
    p.add_argument("--p", type=float, help="intra-block edge probability (default 8 ln n / n)")
    p.add_argument("--q", type=float, help="inter-block edge probability (default ln n / n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--drop-isolated", action="store_true")
    p.add_argument("--out-graph", required=True)
    p.add_argument("--out-labels", required=True)

    p = sub.add_parser("build-knn", help="K-NN affinity graph from a CSV point cloud")
    p.add_argument("--points", required=True)
    p.add_argument("--knn", type=int, help="neighbors per point")
    p.add_argument("--scale-rank", type=int, help="neighbor rank used for the local scale")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named (K, r) combination")
    p.add_argument("--symmetrize", choices=("product", "max", "average"), default="product")
    p.add_argument("--out-graph", required=True)

    p = sub.add_parser("extract", help="extract the cluster around given seeds")
    p.add_argument("--graph", required=True)
    p.add_argument("--seeds-file", help="file with one seed vertex per line")
    p.add_argument("--seeds-frac", type=float, help="sample this fraction of the target block")
    p.add_argument("--labels", help="ground truth (for --seeds-frac sampling and scoring)")
    p.add_argument("--target-block", type=int, default=0)
    p.add_argument("--nhat", type=int, help="estimated cluster size (default: true block size)")
    p.add_argument("--master-seed", type=int, default=0)
    _add_extraction_flags(p)
    p.add_argument("--out-cluster", help="write extracted vertex ids here")
    p.add_argument("--out-report", help="write a JSON trial report here")

    p = sub.add_parser("partition", help="extract every cluster, one at a time")
    p.add_argument("--graph", required=True)
    p.add_argument("--seeds-file", help="file with 'vertex cluster' lines")
    p.add_argument("--seeds-frac", type=float, help="sample this fraction of each block")
    p.add_argument("--labels", help="ground truth (for --seeds-frac sampling and scoring)")
    p.add_argument("--nhats", type=_int_list, help="estimated cluster sizes, comma-separated")
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--remainder", choices=("unassigned", "last", "nearest-seed-walk"),
                   default="unassigned")
    _add_extraction_flags(p)
    p.add_argument("--average", choices=("macro", "micro"), default="macro")
    p.add_argument("--out-assignments", help="write per-vertex labels here")
    p.add_argument("--out-report", help="write a JSON trial report here")

    p = sub.add_parser("eval", help="score a saved extraction or partition")
    p.add_argument("--labels", required=True, help="ground truth labels")
    p.add_argument("--pred-cluster", help="extracted vertex ids (single cluster)")
    p.add_argument("--target-block", type=int, default=0)
    p.add_argument("--pred-labels", help="per-vertex predicted labels (-1 unassigned)")
    p.add_argument("--out-report")

    p = sub.add_parser("sweep", help="repeated seeded trials over a grid of graph sizes")
    p.add_argument("--mode", choices=("lsc", "ilsc"), default="lsc")
    p.add_argument("--n-values", type=_int_list, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--p", type=float, help="default 8 ln n / n")
    p.add_argument("--q", type=float, help="default ln n / n")
    p.add_argument("--seeds", type=int, default=3, help="seeds per cluster")
    p.add_argument("--seeds-frac", type=float)
    p.add_argument("--nhat", type=int, help="default: true block size")
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--remainder", choices=("unassigned", "last", "nearest-seed-walk"),
                   default="unassigned")
    _add_extraction_flags(p)
    p.add_argument("--out", required=True, help="aggregate CSV path")
    p.add_argument("--progress", action="store_true")

    p = sub.add_parser("bench", help="runtime scaling of extraction vs graph size")
    p.add_argument("--n-values", type=_int_list, default=[600, 1200, 2400, 4800, 9600])
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--reject", type=float, default=0.5)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--out", help="optional CSV with per-size mean times")
    return parser


def _load_graph(path) -> Graph:
    return lio.read_edge_list(path)


def _sample_block_seeds(rng, block: IndexSet, frac: float) -> IndexSet:
    count = min(max(1, int(round(frac * len(block)))), len(block))
    return IndexSet(rng.choice(block.indices, size=count, replace=False))


def _cmd_gen_sbm(args) -> int:
    if args.sizes:
        n = sum(args.sizes)
        p = args.p if args.p is not None else default_p(n)
        q = args.q if args.q is not None else default_q(n)
        graph, truth = generate_sbm(
            SbmSpec(tuple(args.sizes), p, q, rng_seed=args.seed),
            drop_isolated=args.drop_isolated,
        )
    else:
        if args.n is None:
            raise _UsageError("gen-sbm needs --n or --sizes")
        p = args.p if args.p is not None else default_p(args.n)
        q = args.q if args.q is not None else default_q(args.n)
        graph, truth = ssbm(args.n, args.k, p, q, rng_seed=args.seed)
        if args.drop_isolated:
            keep = np.flatnonzero(graph.degrees > 0)
            if keep.size < graph.n:
                labels = truth.labels[keep]
                graph = graph.induced_subgraph(IndexSet(keep))
                truth = GroundTruth(labels)
    lio.write_edge_list(graph, args.out_graph)
    lio.write_labels(truth.labels, args.out_labels)
    print(f"wrote {graph.n} vertices, {graph.adjacency.nnz // 2} edges")
    return 0


def _cmd_build_knn(args) -> int:
    cloud = lio.read_points_csv(args.points)
    if args.preset:
        k, r = PRESETS[args.preset]
    elif args.knn is not None and args.scale_rank is not None:
        k, r = args.knn, args.scale_rank
    else:
        raise _UsageError("build-knn needs --preset or both --knn and --scale-rank")
    graph = graph_from_points(cloud, k, r, mode=args.symmetrize)
    lio.write_edge_list(graph, args.out_graph)
    print(f"wrote {graph.n} vertices, {graph.adjacency.nnz // 2} edges")
    return 0


def _extract_inputs(args, graph):
    truth = lio.read_labels(args.labels, n=graph.n) if args.labels else None
    if args.seeds_file:
        seeds = lio.read_index_set(args.seeds_file)
    elif args.seeds_frac is not None:
        if truth is None:
            raise _UsageError("--seeds-frac needs --labels to sample from")
        rng = np.random.Generator(np.random.PCG64(args.master_seed))
        seeds = _sample_block_seeds(rng, truth.block(args.target_block), args.seeds_frac)
    else:
        raise _UsageError("extract needs --seeds-file or --seeds-frac")
    if args.nhat is not None:
        n_hat = args.nhat
    elif truth is not None:
        n_hat = len(truth.block(args.target_block))
    else:
        raise _UsageError("extract needs --nhat when no labels are given")
    return truth, seeds, n_hat


def _cmd_extract(args) -> int:
    graph = _load_graph(args.graph)
    truth, seeds, n_hat = _extract_inputs(args, graph)
    config = SweepConfig(n_values=(graph.n,), reject=args.reject, delta=args.delta,
                         t=args.depth, gamma=args.gamma, max_iter=args.max_iter)
    params = extraction_params(config, n_hat)
    start = time.perf_counter()
    result = lsc(graph, seeds, params)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    print(f"extracted {len(result.cluster)} vertices in {elapsed_ms:.1f} ms "
          f"(candidate set {len(result.omega)}, solver iterations {result.solver_iterations})")
    metrics = (
        evaluate_extraction(result.cluster, truth.block(args.target_block))
        if truth is not None
        else None
    )
    if metrics is not None:
        print(f"jaccard {metrics.jaccard:.4f}  f1 {metrics.f1:.4f}  "
              f"sym-diff {metrics.sym_diff_ratio:.4f}")
    if args.out_cluster:
        lio.write_index_set(result.cluster, args.out_cluster)
    if args.out_report:
        report = lio.TrialReport(
            params={"mode": "lsc", "delta": args.delta, "depth": args.depth,
                    "gamma": args.gamma, "reject": args.reject, "nhat": n_hat,
                    "max_iter": args.max_iter, "n": graph.n, "seeds": len(seeds)},
            metrics=metrics if metrics is not None else lio.EvalReport(),
            wall_time_ms=elapsed_ms,
            seed=args.master_seed,
            solver={"iterations": result.solver_iterations,
                    "residual_norm": result.residual_norm,
                    "converged": result.solver_converged},
        )
        lio.write_report(report, args.out_report)
    return 0


def _partition_inputs(args, graph):
    truth = lio.read_labels(args.labels, n=graph.n) if args.labels else None
    if args.seeds_file:
        seed_sets = lio.read_seed_sets(args.seeds_file)
    elif args.seeds_frac is not None:
        if truth is None:
            raise _UsageError("--seeds-frac needs --labels to sample from")
        rng = np.random.Generator(np.random.PCG64(args.master_seed))
        seed_sets = [
            _sample_block_seeds(rng, truth.block(b), args.seeds_frac)
            for b in range(truth.n_blocks)
        ]
    else:
        raise _UsageError("partition needs --seeds-file or --seeds-frac")
    if args.nhats:
        if len(args.nhats) != len(seed_sets):
            raise _UsageError(f"--nhats lists {len(args.nhats)} sizes for {len(seed_sets)} clusters")
        n_hats = args.nhats
    elif truth is not None:
        n_hats = [len(truth.block(b)) for b in range(len(seed_sets))]
    else:
        raise _UsageError("partition needs --nhats when no labels are given")
    return truth, seed_sets, n_hats


def _cmd_partition(args) -> int:
    graph = _load_graph(args.graph)
    truth, seed_sets, n_hats = _partition_inputs(args, graph)
    config = SweepConfig(n_values=(graph.n,), reject=args.reject, delta=args.delta,
                         t=args.depth, gamma=args.gamma, max_iter=args.max_iter)
    params = extraction_params(config, n_hats[0])
    start = time.perf_counter()
    labeling = ilsc(graph, seed_sets, n_hats, params, remainder=args.remainder)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    sizes = [len(c) for c in labeling.clusters]
    print(f"extracted {len(sizes)} clusters of sizes {sizes} in {elapsed_ms:.1f} ms")
    metrics = evaluate_partition(labeling, truth, average=args.average) if truth else None
    if metrics is not None:
        print(f"accuracy {metrics.accuracy:.4f}  mean f1 {metrics.f1:.4f}  "
              f"misclassified {metrics.misclassified_count}")
    if args.out_assignments:
        lio.write_labels(labeling.assignments, args.out_assignments)
    if args.out_report:
        report = lio.TrialReport(
            params={"mode": "ilsc", "delta": args.delta, "depth": args.depth,
                    "gamma": args.gamma, "reject": args.reject, "nhats": list(n_hats),
                    "max_iter": args.max_iter, "remainder": args.remainder, "n": graph.n},
            metrics=metrics if metrics is not None else lio.EvalReport(),
            wall_time_ms=elapsed_ms,
            seed=args.master_seed,
        )
        lio.write_report(report, args.out_report)
    return 0


def _cmd_eval(args) -> int:
    truth = lio.read_labels(args.labels)
    if (args.pred_cluster is None) == (args.pred_labels is None):
        raise _UsageError("eval needs exactly one of --pred-cluster / --pred-labels")
    if args.pred_cluster:
        pred = lio.read_index_set(args.pred_cluster)
        metrics = evaluate_extraction(pred, truth.block(args.target_block))
    else:
        pred_truth = lio.read_labels(args.pred_labels, n=truth.n)
        from .clustering import ClusterLabeling
        from .sparse_core import IndexSet as _IS

        k = truth.n_blocks
        clusters = [
            _IS(np.flatnonzero(pred_truth.labels == b)) for b in range(k)
        ]
        # identify predicted cluster b with true block b
        labeling = ClusterLabeling(
            assignments=pred_truth.labels.copy(),
            clusters=clusters,
            seed_sets=[truth.block(b) for b in range(k)],
        )
        metrics = evaluate_partition(labeling, truth)
    for key, value in metrics.to_dict().items():
        if key != "per_cluster":
            print(f"{key}: {value}")
    if args.out_report:
        report = lio.TrialReport(params={"mode": "eval"}, metrics=metrics, wall_time_ms=0.0)
        lio.write_report(report, args.out_report)
    return 0


def _cmd_sweep(args) -> int:
    config = SweepConfig(
        n_values=tuple(args.n_values), reject=args.reject, mode=args.mode, k=args.k,
        trials=args.trials, p=args.p, q=args.q, seeds_per_cluster=args.seeds,
        seeds_frac=args.seeds_frac, delta=args.delta, t=args.depth, gamma=args.gamma,
        n_hat=args.nhat, max_iter=args.max_iter, remainder=args.remainder,
        master_seed=args.master_seed,
    )
    rows, aggregates = run_sweep(config, progress=args.progress)
    write_sweep_csv(rows, aggregates, args.out)
    for agg in aggregates:
        if agg["trial"] == "mean":
            print(f"n={agg['n']}: jaccard {agg['jaccard']:.4f}  "
                  f"time {agg['time_ms']:.2f} ms")
    print(f"wrote {args.out}")
    return 0


def _cmd_bench(args) -> int:
    config = BenchConfig(n_values=tuple(args.n_values), reps=args.reps, k=args.k,
                         reject=args.reject, master_seed=args.master_seed)
    rows, slope = run_bench(config)
    for row in rows:
        print(f"n={row['n']:>6}  min {row['min_time_ms']:9.2f} ms  "
              f"mean {row['mean_time_ms']:9.2f} ms  ({row['reps']} reps)")
    print(f"log-log slope: {slope:.3f}")
    if args.out:
        import csv as _csv

        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["n", "min_time_ms", "mean_time_ms", "reps"])
            for row in rows:
                writer.writerow([row["n"], row["min_time_ms"], row["mean_time_ms"], row["reps"]])
    return 0


_COMMANDS = {
    "gen-sbm": _cmd_gen_sbm,
    "build-knn": _cmd_build_knn,
    "extract": _cmd_extract,
    "partition": _cmd_partition,
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (LsclustError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
