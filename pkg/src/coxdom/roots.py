"""Group elements and breadth-first enumeration of positive roots by depth."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import (
    CoxeterDatum,
    bilinear,
    identity_matrix,
    mat_vec,
    mul_simple,
    matrices_equal,
    negate,
    pairings,
    reflect_simple,
    vector_sign,
)
from .errors import CapExceeded, DimensionMismatch, IndexOutOfRange, InsufficientDepth, UnknownRoot
from .scalar import Ordering, ToleranceIndex

log = logging.getLogger(__name__)

DEFAULT_MAX_ROOTS = 500_000
DESCENT_CAP = 100_000


@dataclass(frozen=True)
class Root:
    id: int
    coeffs: tuple
    depth: int
    sign: int = 1

    @property
    def vector(self):
        return self.coeffs if self.sign > 0 else negate(self.coeffs)

    @property
    def support(self):
        return tuple(i for i, c in enumerate(self.coeffs) if c)


@dataclass(frozen=True, eq=False)
class GroupElement:
    word: tuple
    matrix: tuple
    datum: CoxeterDatum = field(repr=False)

    @property
    def length(self):
        return len(self.word)

    def act(self, v):
        return act(self, v)

    def __mul__(self, other):
        return reduce_word(self.datum, self.word + other.word)

    def inverse(self):
        return reduce_word(self.datum, tuple(reversed(self.word)))

    def same_as(self, other):
        return matrices_equal(self.datum.arithmetic, self.matrix, other.matrix)

    def word_1based(self):
        return ".".join(str(a + 1) for a in self.word) if self.word else "e"


def identity(d: CoxeterDatum) -> GroupElement:
    return GroupElement((), identity_matrix(d), d)


def act(g: GroupElement, v):
    if len(v) != g.datum.rank:
        raise DimensionMismatch(f"vector of length {len(v)} for rank {g.datum.rank}")
    return mat_vec(g.matrix, v)


def parse_word(text: str) -> tuple:
    """Dot-separated 1-based generator indices -> 0-based tuple ("e" is the identity)."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    return tuple(int(t) - 1 for t in text.split("."))


def reduce_word(d: CoxeterDatum, word) -> GroupElement:
    """Reduced word for the product of ``word`` via the sign rule.

    Letters are multiplied in on the right. If w alpha_a is negative then
    l(w r_a) < l(w) and, scanning the reduced word of w from the right, the
    first letter s_j with s_j beta_j negative (beta_j being alpha_a pushed
    through the suffix) is the one to delete.
    """
    arith = d.arithmetic
    reduced: list = []
    m = identity_matrix(d)
    for a in word:
        if not 0 <= a < d.rank:
            raise IndexOutOfRange(f"generator {a} out of range 0..{d.rank - 1}")
        col = tuple(row[a] for row in m)
        if vector_sign(arith, col) > 0:
            reduced.append(a)
        else:
            beta = d.simple_root(a)
            for j in range(len(reduced) - 1, -1, -1):
                nb = reflect_simple(d, beta, reduced[j])
                if vector_sign(arith, nb) < 0:
                    del reduced[j]
                    break
                beta = nb
            else:  # pragma: no cover - impossible for a faithful representation
                raise RuntimeError("sign rule failed to locate a deletion")
        m = mul_simple(d, m, a)
    return GroupElement(tuple(reduced), m, d)


def element_from_word(d: CoxeterDatum, word) -> GroupElement:
    return reduce_word(d, tuple(word))


def word_matrix(d: CoxeterDatum, word):
    m = identity_matrix(d)
    for a in word:
        m = mul_simple(d, m, a)
    return m


def inversion_roots(d: CoxeterDatum, word):
    """N(w) listed from a reduced word s_1..s_k: s_k..s_{j+1} alpha_{s_j}."""
    out = []
    k = len(word)
    for j in range(k):
        v = d.simple_root(word[j])
        for i in range(j + 1, k):
            v = reflect_simple(d, v, word[i])
        out.append(v)
    return out


def descent_path(d: CoxeterDatum, v, cap: int = DESCENT_CAP):
    """Walk a vector down to a simple root.

    Repeatedly reflects in the smallest simple root pairing positively with
    the current vector. Returns ``(path, b, sign)`` with
    ``v = sign * r_{path[0]} ... r_{path[-1]} alpha_b`` or ``None`` if ``v``
    is not a root. Each step lowers the depth by exactly one.
    """
    arith = d.arithmetic
    s = vector_sign(arith, v)
    if s == 0:
        return None
    if not _unit_norm(d, v):
        return None
    x = v if s > 0 else negate(v)
    path = []
    for _ in range(cap):
        nz = [i for i, c in enumerate(x) if not arith.is_zero(c)]
        if len(nz) == 1 and arith.compare(x[nz[0]], arith.scalar(1)) == Ordering.EQUAL:
            return path, nz[0], s
        p = pairings(d, x)
        for a, pa in enumerate(p):
            if arith.sign(pa) > 0:
                break
        else:
            return None
        x = reflect_simple(d, x, a)
        if vector_sign(arith, x) <= 0:
            return None
        path.append(a)
    raise CapExceeded(f"descent did not reach a simple root within {cap} steps")


def _unit_norm(d, v):
    arith = d.arithmetic
    norm = bilinear(d, v, v)
    if arith.exact:
        return norm == 1
    # absolute error grows with the coefficient size of deep roots
    return abs(norm - 1.0) <= arith.eps * max(1.0, sum(c * c for c in v))


def descent_depth(d: CoxeterDatum, v):
    res = descent_path(d, v)
    if res is None:
        return None
    return len(res[0]) + 1


class RootStore:
    """Depth-stratified, deduplicated set of enumerated positive roots.

    ``levels[k]`` holds the ids of the roots of depth ``k + 1``. Levels are
    committed whole, sorted by coefficient tuple (descending), so ids are
    deterministic. A root of depth d+1 is r_a x for some x of depth d with
    (x, alpha_a) < 0.
    """

    def __init__(self, datum: CoxeterDatum, max_roots: int = DEFAULT_MAX_ROOTS, threads: int = 1,
                 auto_extend: bool = True):
        self.datum = datum
        self.arithmetic = datum.arithmetic
        self.max_roots = max_roots
        self.threads = max(1, int(threads))
        self.auto_extend = auto_extend
        self.roots: list[Root] = []
        self.levels: list[list[int]] = []
        self.parent: list = []
        self.recurrence_count: list[int] = []
        self.recurrence_conflicts: list = []
        self.bfs_anomalies: list = []
        self.exhausted = False
        self.dominated: dict = {}
        self.dominated_count: dict = {}
        self._index = ToleranceIndex(self.arithmetic)
        self._np = None
        self._np_len = 0

    def __len__(self):
        return len(self.roots)

    @property
    def depth(self):
        """Deepest level that is fully enumerated (infinite if exhausted)."""
        return len(self.levels)

    def covers_depth(self, d):
        return self.exhausted or self.depth >= d

    def level(self, d):
        if d < 1 or d > len(self.levels):
            return []
        return [self.roots[i] for i in self.levels[d - 1]]

    def roots_up_to(self, d):
        out = []
        for k in range(1, min(d, len(self.levels)) + 1):
            out.extend(self.level(k))
        return out

    def find(self, vec):
        """(id, sign) of a root in the store, or None."""
        if len(vec) != self.datum.rank:
            raise DimensionMismatch(f"vector of length {len(vec)} for rank {self.datum.rank}")
        s = vector_sign(self.arithmetic, vec)
        if s == 0:
            return None
        key = vec if s > 0 else negate(vec)
        rid = self._index.get(key)
        if rid is None:
            return None
        return rid, s

    def locate(self, vec):
        """Resolve a vector to ``(Root, sign)``, extending the store if needed."""
        vec = tuple(self.arithmetic.scalar(c) for c in vec)
        hit = self.find(vec)
        if hit is not None:
            return self.roots[hit[0]], hit[1]
        if self.exhausted:
            raise UnknownRoot(f"{self._fmt(vec)} is not a root")
        depth = descent_depth(self.datum, vec)
        if depth is None:
            raise UnknownRoot(f"{self._fmt(vec)} is not a root")
        if depth <= self.depth:  # pragma: no cover - store inconsistency
            raise UnknownRoot(f"{self._fmt(vec)} has depth {depth} but is missing from the store")
        if not self.auto_extend:
            raise InsufficientDepth(f"{self._fmt(vec)} has depth {depth}; store enumerated to {self.depth}")
        enumerate_to_depth(self, depth)
        hit = self.find(vec)
        if hit is None:  # pragma: no cover
            raise UnknownRoot(f"{self._fmt(vec)} not found after enumeration")
        return self.roots[hit[0]], hit[1]

    def ensure_depth(self, d):
        if not self.covers_depth(d):
            if not self.auto_extend:
                raise InsufficientDepth(f"need depth {d}; store enumerated to {self.depth}")
            enumerate_to_depth(self, d)

    def _fmt(self, vec):
        return "(" + ",".join(str(self.arithmetic.export(c)) for c in vec) + ")"

    def arrays(self):
        """(coefficient matrix, depth vector) as float64/intp numpy arrays."""
        if self._np is None or self._np_len != len(self.roots):
            X = np.array([[float(c) for c in r.coeffs] for r in self.roots], dtype=np.float64)
            X = X.reshape(len(self.roots), self.datum.rank)
            D = np.array([r.depth for r in self.roots], dtype=np.intp)
            self._np = (X, D)
            self._np_len = len(self.roots)
        return self._np

    def gram_array(self):
        return np.array([[float(v) for v in row] for row in self.datum.gram], dtype=np.float64)

    def _commit_level(self, entries):
        """entries: list of (coeffs, parent_id, gen, recurrence_count)."""
        entries.sort(key=lambda e: e[0], reverse=True)
        depth = len(self.levels) + 1
        ids = []
        for coeffs, parent, gen, rc in entries:
            rid = len(self.roots)
            self.roots.append(Root(rid, coeffs, depth))
            self._index.add(coeffs, rid)
            self.parent.append(None if parent is None else (parent, gen))
            self.recurrence_count.append(rc)
            ids.append(rid)
        self.levels.append(ids)
        if not ids:
            self.exhausted = True
            self.levels.pop()


def enumerate_to_depth(store: RootStore, d_max: int) -> RootStore:
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    d = store.datum
    arith = store.arithmetic
    while not store.exhausted and store.depth < d_max:
        if store.depth == 0:
            store._commit_level([(d.simple_root(i), None, None, 0) for i in range(d.rank)])
            continue
        current = store.levels[-1]
        minus_one = arith.scalar(-1)
        candidates = []
        if arith.exact:
            for rid in current:
                x = store.roots[rid].coeffs
                for a, p in enumerate(pairings(d, x)):
                    if arith.sign(p) < 0:
                        candidates.append((reflect_simple(d, x, a), rid, a, p))
        else:
            X = np.array([store.roots[i].coeffs for i in current], dtype=np.float64)
            children, parent, gen, pair = kernels.expand_level(X, store.gram_array(), arith.eps)
            for row, pi, a, p in zip(children, parent, gen, pair):
                candidates.append((tuple(float(c) + 0.0 for c in row), current[pi], int(a), float(p)))
        fresh = ToleranceIndex(arith)
        entries = []
        for child, pid, a, p in candidates:
            rc = store.recurrence_count[pid] + (1 if arith.compare(p, minus_one) != Ordering.GREATER else 0)
            known = store._index.get(child)
            if known is not None:
                store.bfs_anomalies.append((pid, a, known))
                continue
            j = fresh.get(child)
            if j is None:
                fresh.add(child, len(entries))
                entries.append((child, pid, a, rc))
            elif entries[j][3] != rc:
                store.recurrence_conflicts.append((entries[j][0], entries[j][3], rc))
        if len(store.roots) + len(entries) > store.max_roots:
            raise CapExceeded(
                f"level {store.depth + 1} would bring the store to {len(store.roots) + len(entries)} roots "
                f"(cap {store.max_roots})"
            )
        store._commit_level(entries)
        log.debug("level %d: %d roots", store.depth, len(entries))
    return store


def depth_of(store: RootStore, x) -> int:
    root, _ = store.locate(x)
    return root.depth


def reflection_word(store: RootStore, x) -> GroupElement:
    """r_x as a reduced palindromic word w a w^{-1}, of length 2 dep(x) - 1."""
    root, _ = store.locate(x)
    path, b, _ = descent_path(store.datum, root.coeffs)
    word = tuple(path) + (b,) + tuple(reversed(path))
    return GroupElement(word, word_matrix(store.datum, word), store.datum)


def inversion_set(g: GroupElement, store: RootStore) -> frozenset:
    """N(g): ids of positive roots sent negative by g."""
    length = g.length
    if length == 0:
        return frozenset()
    store.ensure_depth(length)
    arith = store.arithmetic
    cand = store.roots_up_to(length)
    if arith.exact:
        return frozenset(r.id for r in cand if vector_sign(arith, act(g, r.coeffs)) < 0)
    X, _ = store.arrays()
    ids = np.array([r.id for r in cand], dtype=np.intp)
    M = np.array([[float(v) for v in row] for row in g.matrix])
    img = X[ids] @ M.T
    neg = (img < -arith.eps).any(axis=1)
    return frozenset(int(i) for i in ids[neg])


def elements_up_to_length(d: CoxeterDatum, max_length: int):
    """All group elements of length <= max_length, breadth first."""
    arith = d.arithmetic
    e = identity(d)
    out = [e]
    frontier = [e]
    seen = ToleranceIndex(arith)
    seen.add(_flat(e.matrix), 0)
    for _ in range(max_length):
        nxt = []
        for g in frontier:
            for a in range(d.rank):
                col = tuple(row[a] for row in g.matrix)
                if vector_sign(arith, col) < 0:
                    continue
                m = mul_simple(d, g.matrix, a)
                key = _flat(m)
                if key in seen:
                    continue
                seen.add(key, len(out))
                h = GroupElement(g.word + (a,), m, d)
                out.append(h)
                nxt.append(h)
        frontier = nxt
    return out


def _flat(m):
    return tuple(v for row in m for v in row)
