"""Float64 hot loops, compiled when available.

The Cython extension ``coxdom._ckernels`` is used if it imports; otherwise
the numpy implementation in ``coxdom._kernels_py`` takes over. Set
``COXDOM_PURE_PYTHON=1`` to force the fallback.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py

if os.environ.get("COXDOM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def use(name):
    """Switch implementation at runtime ("cython" or "python"); for benchmarks and tests."""
    global _impl, BACKEND
    if name == "python":
        _impl, BACKEND = _kernels_py, "python"
    elif name == "cython":
        from . import _ckernels
        _impl, BACKEND = _ckernels, "cython"
    else:
        raise ValueError(name)


def available():
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return ["python"]
    return ["cython", "python"]


def _c(a, dtype):
    return np.ascontiguousarray(a, dtype=dtype)


def expand_level(X, G, eps):
    return _impl.expand_level(_c(X, np.float64), _c(G, np.float64), float(eps))


def dominated_counts(Q, qdepth, qself, X, depth, G, eps, threads=1):
    QG = _c(np.asarray(Q, dtype=np.float64) @ np.asarray(G, dtype=np.float64), np.float64)
    qdepth = _c(qdepth, np.intp)
    qself = _c(qself, np.intp)
    X = _c(X, np.float64)
    depth = _c(depth, np.intp)
    n = len(QG)
    if threads <= 1 or n < 2 * threads:
        return _impl.dominated_counts(QG, qdepth, qself, X, depth, float(eps))
    bounds = np.linspace(0, n, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(
            pool.map(
                lambda se: _impl.dominated_counts(
                    QG[se[0]:se[1]], qdepth[se[0]:se[1]], qself[se[0]:se[1]], X, depth, float(eps)
                ),
                zip(bounds[:-1], bounds[1:]),
            )
        )
    return np.concatenate(parts)


def dominated_indices(q, qdepth, qself, X, depth, G, eps):
    qg = _c(np.asarray(G, dtype=np.float64) @ np.asarray(q, dtype=np.float64), np.float64)
    return _impl.dominated_indices(qg, int(qdepth), int(qself), _c(X, np.float64), _c(depth, np.intp), float(eps))


def cone_descent(v, G, cap, eps):
    status, final, word = _impl.cone_descent(_c(v, np.float64), _c(G, np.float64), int(cap), float(eps))
    return int(status), final, [int(a) for a in word]
