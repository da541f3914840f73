"""numpy fallback for the compiled kernels in ``_ckernels.pyx``."""

import numpy as np

_CHUNK = 1024


def expand_level(X, G, eps):
    X = np.asarray(X, dtype=np.float64)
    P = X @ G.T
    rows, gens = np.nonzero(P < -eps)
    pair = P[rows, gens]
    children = X[rows].copy()
    children[np.arange(len(rows)), gens] -= 2.0 * pair
    return children, rows.astype(np.intp), gens.astype(np.intp), pair


def dominated_counts(QG, qdepth, qself, X, depth, eps):
    out = np.zeros(len(QG), dtype=np.intp)
    thresh = 1.0 - eps
    for start in range(0, len(QG), _CHUNK):
        stop = start + _CHUNK
        S = QG[start:stop] @ X.T
        mask = (S >= thresh) & (depth[None, :] <= qdepth[start:stop, None])
        rows = np.arange(len(S))
        selfcol = qself[start:stop]
        valid = (selfcol >= 0) & (selfcol < X.shape[0])
        mask[rows[valid], selfcol[valid]] = False
        out[start:stop] = mask.sum(axis=1)
    return out


def dominated_indices(qg, qdepth, qself, X, depth, eps):
    s = X @ qg
    mask = (s >= 1.0 - eps) & (depth <= qdepth)
    if 0 <= qself < len(mask):
        mask[qself] = False
    return np.nonzero(mask)[0].astype(np.intp)


def cone_descent(v0, G, cap, eps):
    v = np.array(v0, dtype=np.float64)
    word = []
    if (v < -eps).any():
        return 1, v, np.array(word, dtype=np.intp)
    while True:
        p = G @ v
        hits = np.nonzero(p > eps)[0]
        if len(hits) == 0:
            return 0, v, np.array(word, dtype=np.intp)
        if len(word) >= cap:
            return 2, v, np.array(word, dtype=np.intp)
        a = int(hits[0])
        v[a] -= 2.0 * p[a]
        word.append(a)
        if v[a] < -eps:
            return 1, v, np.array(word, dtype=np.intp)
