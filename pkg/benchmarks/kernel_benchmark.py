"""Compare the compiled CSR kernels against the numpy fallback.

Times the three hot kernels (matvec, transposed matvec, absolute transposed
matvec) and one end-to-end extraction per backend, on block-model graphs of
increasing size.

Usage: python benchmarks/kernel_benchmark.py [--sizes 600,2400,9600] [--reps 20]
"""

import argparse
import time

import numpy as np

from lsclust import IndexSet, kernels, lsc, ssbm
from lsclust.clustering import ExtractionParams
from lsclust.experiments import default_p, default_q
from lsclust.pursuit import PursuitParams
from lsclust.random_walk import RandomWalkParams


def _best_of(fn, reps):
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times) * 1e3


def bench_size(n: int, reps: int):
    graph, truth = ssbm(n, 3, default_p(n), default_q(n), rng_seed=1)
    a = graph.adjacency
    x = np.random.default_rng(0).standard_normal(n)
    block = truth.block(0)
    seeds = IndexSet(block.indices[:3])
    params = ExtractionParams(
        rw=RandomWalkParams(delta=0.6, t=3, n_hat=len(block)),
        pursuit=PursuitParams(gamma=0.2, reject=0.5),
    )
    args = (a.n_rows, a.n_cols, a.row_ptr, a.col_idx, a.values, x)
    rows = []
    for backend in kernels.available_backends():
        kernels.use_backend(backend)
        rows.append({
            "backend": backend,
            "matvec_ms": _best_of(lambda: kernels.matvec(*args), reps),
            "matvec_t_ms": _best_of(lambda: kernels.matvec_t(*args), reps),
            "abs_matvec_t_ms": _best_of(lambda: kernels.abs_matvec_t(*args), reps),
            "lsc_ms": _best_of(lambda: lsc(graph, seeds, params), max(3, reps // 4)),
        })
    return graph, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--sizes", default="600,2400,9600",
                        help="comma-separated graph sizes")
    parser.add_argument("--reps", type=int, default=20)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    default = kernels.active_backend()
    print(f"backends available: {', '.join(kernels.available_backends())} "
          f"(default: {default})")
    header = f"{'n':>7} {'nnz':>9} {'backend':>8} {'matvec':>9} {'matvec_t':>9} {'abs_mv_t':>9} {'lsc':>9}"
    print(header)
    print("-" * len(header))
    try:
        for n in sizes:
            graph, rows = bench_size(n, args.reps)
            for row in rows:
                print(f"{n:>7} {graph.adjacency.nnz:>9} {row['backend']:>8} "
                      f"{row['matvec_ms']:>8.3f}m {row['matvec_t_ms']:>8.3f}m "
                      f"{row['abs_matvec_t_ms']:>8.3f}m {row['lsc_ms']:>8.2f}m")
            if len(rows) == 2:
                speedup = rows[1]["matvec_ms"] / max(rows[0]["matvec_ms"], 1e-9)
                ratio = "cython" if rows[0]["backend"] == "cython" else "numpy"
                print(f"{'':>7} {'':>9} {'':>8} matvec speedup of {ratio}: {speedup:.2f}x")
    finally:
        kernels.use_backend(default)


if __name__ == "__main__":
    main()
