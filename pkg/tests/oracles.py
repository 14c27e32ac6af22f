"""Independent brute-force reference implementations used by the tests.

Everything here works on dense numpy arrays or plain Python sets and never
calls into the package's own numerical paths, so agreement between the two
sides is meaningful.
"""

import numpy as np


def dense_matvec(dense, x):
    return np.asarray(dense) @ np.asarray(x)


def dense_abs_matvec_t(dense, y):
    return np.abs(np.asarray(dense)).T @ np.abs(np.asarray(y))


def dense_lstsq_normal(dense, y):
    """Least-squares solution via the normal equations, solved densely."""
    a = np.asarray(dense)
    return np.linalg.solve(a.T @ a, a.T @ np.asarray(y))


def dense_cond_normal(dense):
    """Condition number of A.T A via a dense symmetric eigensolver."""
    a = np.asarray(dense)
    eigs = np.linalg.eigvalsh(a.T @ a)
    return eigs[-1] / eigs[0]


def dense_spectral_norm(dense):
    return np.linalg.norm(np.asarray(dense), 2)


def top_s_sorted(v, s):
    """Top-s index set via a full sort; ties broken by ascending index."""
    v = np.asarray(v)
    order = sorted(range(v.size), key=lambda i: (-v[i], i))
    return sorted(order[:s])


def brute_knn(points, k):
    """Exhaustive K-NN per point (self excluded), ties by ascending index."""
    points = np.asarray(points)
    m = points.shape[0]
    neighbors = []
    for i in range(m):
        d = [(float(np.sum((points[i] - points[j]) ** 2)), j) for j in range(m) if j != i]
        d.sort()
        neighbors.append([j for _, j in d[:k]])
    return neighbors


def set_jaccard(pred, truth):
    pred, truth = set(pred), set(truth)
    if not pred and not truth:
        return 1.0
    return len(pred & truth) / len(pred | truth)


def set_f1(pred, truth):
    pred, truth = set(pred), set(truth)
    hits = len(pred & truth)
    p = hits / len(pred) if pred else 0.0
    r = hits / len(truth)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return f, p, r


def set_sym_diff_ratio(pred, truth):
    pred, truth = set(pred), set(truth)
    return len(pred ^ truth) / len(truth)


def dense_rw_laplacian(adj_dense):
    a = np.asarray(adj_dense, dtype=float)
    d = a.sum(axis=1)
    return np.eye(a.shape[0]) - a / d[:, None]


def dense_transition(adj_dense):
    a = np.asarray(adj_dense, dtype=float)
    d = a.sum(axis=0)
    return a / d[None, :]


def lsc_dense(adj_dense, seeds, n_hat, delta=0.6, t=3, gamma=0.2, reject=0.5, max_iter=1):
    """Straight-line dense reimplementation of the full extraction pipeline:
    degree-weighted diffusion, top-s threshold, low-score column removal,
    dense least squares, rejection. Same tie rules (ascending index)."""
    a = np.asarray(adj_dense, dtype=float)
    n = a.shape[0]
    d = a.sum(axis=1)
    p = dense_transition(a)
    lap = dense_rw_laplacian(a)
    gamma_set = np.asarray(sorted(seeds), dtype=int)
    s = max(1, min(int(np.floor((1 + delta) * n_hat + 0.5)), n))
    for _ in range(max_iter):
        v = np.zeros(n)
        v[gamma_set] = d[gamma_set]
        for _ in range(t):
            v = p @ v
        score = v / d
        top = sorted(range(n), key=lambda i: (-score[i], i))[:s]
        omega = np.asarray(sorted(set(top) | set(gamma_set.tolist())), dtype=int)
        y = lap[:, omega].sum(axis=1)
        scores = np.abs(lap[:, omega]).T @ np.abs(y)
        k = max(1, int(np.floor(gamma * omega.size)))
        removal_order = sorted(range(omega.size), key=lambda j: (scores[j], omega[j]))
        removed = set(omega[j] for j in removal_order[:k])
        cols = np.asarray([u for u in omega if u not in removed], dtype=int)
        x, *_ = np.linalg.lstsq(lap[:, cols], y, rcond=None)
        rejected = set(cols[x > reject].tolist())
        gamma_set = np.asarray([u for u in omega if u not in rejected], dtype=int)
    return gamma_set
