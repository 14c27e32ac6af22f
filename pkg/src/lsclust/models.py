"""Block-model graph generation with ground truth, and the inter-connectivity
statistics used to judge how hard an instance is.

Randomness discipline: every draw is reproduced byte-for-byte from
``rng_seed``. The seed feeds a ``numpy.random.SeedSequence`` which is spawned
into one child stream per block pair, in row-major pair order, so the edges of
each block pair come from an independent, platform-stable PCG64 stream.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ClusteringWarning, DimensionError, IsolatedVertexError
from .sparse_core import Graph, IndexSet, SparseMatrix, rw_laplacian


@dataclass(frozen=True)
class SbmSpec:
    """Stochastic block model parameters.

    block_sizes : positive size of each block; vertices are numbered block by
        block, so block b occupies a contiguous id range.
    p_in / p_out : independent edge probabilities within and between blocks,
        with ``0 <= p_out <= p_in <= 1``.
    rng_seed : integer seed; fixes the draw completely.
    """

    block_sizes: tuple[int, ...]
    p_in: float
    p_out: float
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(s) for s in self.block_sizes))
        if len(self.block_sizes) == 0 or any(s <= 0 for s in self.block_sizes):
            raise ValueError("block sizes must be positive")
        if not (0.0 <= self.p_out <= self.p_in <= 1.0):
            raise ValueError("need 0 <= p_out <= p_in <= 1")

    @property
    def n(self) -> int:
        return sum(self.block_sizes)


class GroundTruth:
    """True block id per vertex."""

    __slots__ = ("labels",)

    def __init__(self, labels):
        labels = np.asarray(labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if labels.size and labels.min() < 0:
            raise ValueError("labels must be non-negative")
        labels = labels.copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    def __setattr__(self, name, value):
        raise AttributeError("GroundTruth is immutable")

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def n_blocks(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def block(self, b: int) -> IndexSet:
        return IndexSet._from_sorted(np.flatnonzero(self.labels == b).astype(np.int64))

    def block_sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_blocks)

    def __eq__(self, other):
        if not isinstance(other, GroundTruth):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __repr__(self):
        return f"GroundTruth(n={self.n}, blocks={self.n_blocks})"


def _bernoulli_positions(rng: np.random.Generator, m: int, p: float) -> np.ndarray:
    """Positions of successes among ``m`` independent Bernoulli(p) slots,
    sampled by geometric gap skipping (memory O(#successes))."""
    if m <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(m, dtype=np.int64)
    mean = m * p
    chunk = int(mean + 6.0 * np.sqrt(mean) + 16.0)
    out = []
    last = -1
    while last < m - 1:
        gaps = rng.geometric(p, size=chunk).astype(np.int64)
        positions = last + np.cumsum(gaps)
        inside = positions[positions < m]
        out.append(inside)
        if inside.size < positions.size:
            break
        last = int(positions[-1])
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def _triangle_pairs(linear: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert the row-major enumeration of pairs i < j within a block."""
    rows = np.arange(size, dtype=np.int64)
    cum = rows * (2 * size - rows - 1) // 2  # pairs in rows before row i
    i = np.searchsorted(cum, linear, side="right") - 1
    j = i + 1 + (linear - cum[i])
    return i, j


def generate_sbm(spec: SbmSpec, drop_isolated: bool = False) -> tuple[Graph, GroundTruth]:
    """Draw an undirected simple graph from the block model.

    Each intra-block pair is joined independently with probability ``p_in``
    and each inter-block pair with ``p_out``. With ``drop_isolated``,
    zero-degree vertices are removed and ids compacted (the ground truth
    shrinks to match); by default they are kept.
    """
    sizes = np.asarray(spec.block_sizes, dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    n = int(offsets[-1])
    n_blocks = sizes.size
    n_pairs = n_blocks * (n_blocks + 1) // 2
    streams = np.random.SeedSequence(spec.rng_seed).spawn(n_pairs)
    us, vs = [], []
    pair_no = 0
    for b1 in range(n_blocks):
        for b2 in range(b1, n_blocks):
            rng = np.random.Generator(np.random.PCG64(streams[pair_no]))
            pair_no += 1
            if b1 == b2:
                s = int(sizes[b1])
                hits = _bernoulli_positions(rng, s * (s - 1) // 2, spec.p_in)
                if hits.size:
                    i, j = _triangle_pairs(hits, s)
                    us.append(i + offsets[b1])
                    vs.append(j + offsets[b1])
            else:
                s1, s2 = int(sizes[b1]), int(sizes[b2])
                hits = _bernoulli_positions(rng, s1 * s2, spec.p_out)
                if hits.size:
                    us.append(hits // s2 + offsets[b1])
                    vs.append(hits % s2 + offsets[b2])
    labels = np.repeat(np.arange(n_blocks, dtype=np.int64), sizes)
    if us:
        u = np.concatenate(us)
        v = np.concatenate(vs)
    else:
        u = np.empty(0, dtype=np.int64)
        v = np.empty(0, dtype=np.int64)
    graph = Graph.from_edges(n, u, v)
    truth = GroundTruth(labels)
    if drop_isolated:
        keep = np.flatnonzero(graph.degrees > 0)
        if keep.size < n:
            graph = graph.induced_subgraph(IndexSet._from_sorted(keep))
            truth = GroundTruth(labels[keep])
    return graph, truth


def ssbm(n: int, k: int, p: float, q: float, rng_seed: int = 0) -> tuple[Graph, GroundTruth]:
    """Symmetric block model: k blocks of size ``n // k`` (the remainder is
    spread over the first ``n mod k`` blocks)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    base, extra = divmod(int(n), int(k))
    sizes = tuple(base + (1 if i < extra else 0) for i in range(k))
    return generate_sbm(SbmSpec(block_sizes=sizes, p_in=p, p_out=q, rng_seed=rng_seed))


def epsilon_stats(g: Graph, truth: GroundTruth) -> tuple[np.ndarray, float]:
    """Per-vertex fraction of weighted degree leaving the vertex's own block,
    and its maximum over the graph. Zero-degree vertices get 0 with a
    warning."""
    if truth.n != g.n:
        raise DimensionError(f"labels cover {truth.n} vertices, graph has {g.n}")
    a = g.adjacency
    counts = np.diff(a.row_ptr)
    rows = np.repeat(np.arange(g.n), counts)
    cross = truth.labels[rows] != truth.labels[a.col_idx]
    out_degree = np.bincount(rows[cross], weights=a.values[cross], minlength=g.n)
    eps = np.zeros(g.n)
    nonzero = g.degrees > 0
    if not np.all(nonzero):
        warnings.warn(
            f"{int((~nonzero).sum())} zero-degree vertices; their ratio is set to 0",
            ClusteringWarning,
        )
    eps[nonzero] = out_degree[nonzero] / g.degrees[nonzero]
    eps_max = float(eps.max()) if eps.size else 0.0
    return eps, eps_max


def intra_block_graph(g: Graph, truth: GroundTruth) -> Graph:
    """Subgraph keeping only edges whose endpoints share a block."""
    if truth.n != g.n:
        raise DimensionError(f"labels cover {truth.n} vertices, graph has {g.n}")
    a = g.adjacency
    counts = np.diff(a.row_ptr)
    rows = np.repeat(np.arange(g.n, dtype=np.int64), counts)
    same = truth.labels[rows] == truth.labels[a.col_idx]
    adj = SparseMatrix.from_coo(g.n, g.n, rows[same], a.col_idx[same], a.values[same])
    return Graph(adj)


def split_laplacian(g: Graph, truth: GroundTruth) -> tuple[SparseMatrix, SparseMatrix]:
    """Laplacian of the intra-block subgraph, and the difference
    ``M = L - L_intra``.

    Raises IsolatedVertexError when some vertex has no intra-block edge at
    all (its intra-block Laplacian row is undefined).
    """
    intra = intra_block_graph(g, truth)
    zero = np.flatnonzero(intra.degrees == 0)
    if zero.size:
        raise IsolatedVertexError(int(zero[0]), f"vertex {zero[0]} has zero intra-block degree")
    l_full = rw_laplacian(g)
    l_in = rw_laplacian(intra)
    fr, fc, fv = l_full.to_coo()
    ir, ic, iv = l_in.to_coo()
    m = SparseMatrix.from_coo(
        g.n,
        g.n,
        np.concatenate([fr, ir]),
        np.concatenate([fc, ic]),
        np.concatenate([fv, -iv]),
    )
    return l_in, m
