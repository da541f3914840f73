# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled float64 kernels. Semantics match ``_kernels_py`` exactly."""

import numpy as np


def expand_level(const double[:, ::1] X, const double[:, ::1] G, double eps):
    cdef Py_ssize_t n = X.shape[0], r = X.shape[1]
    cdef Py_ssize_t i, a, j, k = 0
    cdef double p
    children = np.empty((n * r, r), dtype=np.float64)
    parent = np.empty(n * r, dtype=np.intp)
    gen = np.empty(n * r, dtype=np.intp)
    pair = np.empty(n * r, dtype=np.float64)
    cdef double[:, ::1] C = children
    cdef Py_ssize_t[::1] P = parent
    cdef Py_ssize_t[::1] A = gen
    cdef double[::1] Q = pair
    with nogil:
        for i in range(n):
            for a in range(r):
                p = 0.0
                for j in range(r):
                    p = p + G[a, j] * X[i, j]
                if p < -eps:
                    for j in range(r):
                        C[k, j] = X[i, j]
                    C[k, a] = X[i, a] - 2.0 * p
                    P[k] = i
                    A[k] = a
                    Q[k] = p
                    k += 1
    return children[:k], parent[:k], gen[:k], pair[:k]


def dominated_counts(const double[:, ::1] QG, const Py_ssize_t[::1] qdepth,
                     const Py_ssize_t[::1] qself, const double[:, ::1] X,
                     const Py_ssize_t[::1] depth, double eps):
    """For each query row i, count j != qself[i] with depth[j] <= qdepth[i]
    and <QG[i], X[j]> >= 1 - eps. ``QG`` holds query vectors already
    multiplied by the Gram matrix."""
    cdef Py_ssize_t n = QG.shape[0], N = X.shape[0], r = X.shape[1]
    cdef Py_ssize_t i, j, k, cnt, dq
    cdef double s, thresh = 1.0 - eps
    out = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t[::1] O = out
    with nogil:
        for i in range(n):
            cnt = 0
            dq = qdepth[i]
            for j in range(N):
                if depth[j] > dq or j == qself[i]:
                    continue
                s = 0.0
                for k in range(r):
                    s = s + QG[i, k] * X[j, k]
                if s >= thresh:
                    cnt += 1
            O[i] = cnt
    return out


def dominated_indices(const double[::1] qg, Py_ssize_t qdepth, Py_ssize_t qself,
                      const double[:, ::1] X, const Py_ssize_t[::1] depth, double eps):
    cdef Py_ssize_t N = X.shape[0], r = X.shape[1]
    cdef Py_ssize_t j, k, m = 0
    cdef double s, thresh = 1.0 - eps
    out = np.empty(N, dtype=np.intp)
    cdef Py_ssize_t[::1] O = out
    with nogil:
        for j in range(N):
            if depth[j] > qdepth or j == qself:
                continue
            s = 0.0
            for k in range(r):
                s = s + qg[k] * X[j, k]
            if s >= thresh:
                O[m] = j
                m += 1
    return out[:m]


def cone_descent(const double[::1] v0, const double[:, ::1] G, Py_ssize_t cap, double eps):
    """Repeatedly reflect in the smallest simple root with positive pairing.

    Returns (status, final vector, word) with status 0 = all pairings <= eps
    and coefficients >= -eps, 1 = a coefficient dropped below -eps, 2 = cap.
    """
    cdef Py_ssize_t r = v0.shape[0]
    cdef Py_ssize_t a, j, steps = 0, pick
    cdef double p, best
    v_arr = np.array(v0, dtype=np.float64)
    word = np.empty(cap, dtype=np.intp)
    cdef double[::1] v = v_arr
    cdef Py_ssize_t[::1] W = word
    cdef int status = 2
    with nogil:
        for j in range(r):
            if v[j] < -eps:
                status = 1
                break
        while status == 2:
            pick = -1
            for a in range(r):
                p = 0.0
                for j in range(r):
                    p = p + G[a, j] * v[j]
                if p > eps:
                    pick = a
                    best = p
                    break
            if pick < 0:
                status = 0
                break
            if steps >= cap:
                break
            v[pick] = v[pick] - 2.0 * best
            W[steps] = pick
            steps += 1
            if v[pick] < -eps:
                status = 1
                break
    return status, v_arr, word[:steps]
