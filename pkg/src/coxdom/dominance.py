"""The dominance order on roots, dominated sets D(x) and the partition D_n.

For positive roots, x dominates y exactly when (x, y) >= 1 and
dep(x) >= dep(y); the remaining sign cases reduce to this one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import bilinear, negate
from .errors import CertificationFailed, InvalidArgument, NotDominant
from .roots import RootStore, act
from .scalar import Ordering

INNER_PRODUCT_BELOW_1 = "inner-product-below-1"
DEPTH_ORDER = "depth-order"
SIGN_RULE = "sign-rule"
POSITIVE = "positive"


@dataclass(frozen=True)
class DominanceVerdict:
    holds: bool
    reason: str

    def __bool__(self):
        return self.holds


@dataclass
class DnReport:
    sets: dict  # n -> frozenset of root ids
    complete_up_to: int
    depth_scanned: int
    exhausted: bool
    recurrence_mismatches: list = field(default_factory=list)

    def sizes(self):
        return {n: len(s) for n, s in self.sets.items()}


@dataclass
class CoverResult:
    is_cover: bool
    witness: object = None  # GroupElement with wx in D_0 and wy in -D_0
    between: tuple = None  # a root strictly between x and y when not a cover
    store_check: bool = True


def _at_least_one(arith, value):
    return arith.compare(value, arith.scalar(1)) != Ordering.LESS


def dominates(store: RootStore, x, y) -> DominanceVerdict:
    rx, sx = store.locate(x)
    ry, sy = store.locate(y)
    arith = store.arithmetic
    if sx > 0 and sy > 0:
        if rx.id == ry.id:
            return DominanceVerdict(True, POSITIVE)
        if not _at_least_one(arith, bilinear(store.datum, rx.coeffs, ry.coeffs)):
            return DominanceVerdict(False, INNER_PRODUCT_BELOW_1)
        if rx.depth < ry.depth:
            return DominanceVerdict(False, DEPTH_ORDER)
        return DominanceVerdict(True, POSITIVE)
    if sx > 0 > sy:
        # the identity sends y negative but not x, so dominance can only run x -> y
        if _at_least_one(arith, -bilinear(store.datum, rx.coeffs, ry.coeffs)):
            return DominanceVerdict(True, POSITIVE)
        return DominanceVerdict(False, INNER_PRODUCT_BELOW_1)
    if sx < 0 < sy:
        return DominanceVerdict(False, SIGN_RULE)
    return dominates(store, ry.coeffs, rx.coeffs)


def _positive(store, x):
    root, sign = store.locate(x)
    if sign < 0:
        raise InvalidArgument("expected a positive root")
    return root


def dominated_set(store: RootStore, x) -> frozenset:
    """D(x): ids of the positive roots other than x dominated by x.

    Only roots of depth <= dep(x) can be dominated, and the store holds all
    of them once x itself has been located.
    """
    root = _positive(store, x)
    cached = store.dominated.get(root.id)
    if cached is not None:
        return cached
    arith = store.arithmetic
    if arith.exact:
        one = arith.scalar(1)
        ids = frozenset(
            r.id
            for r in store.roots_up_to(root.depth)
            if r.id != root.id and bilinear(store.datum, root.coeffs, r.coeffs) >= one
        )
    else:
        X, D = store.arrays()
        hits = kernels.dominated_indices(
            np.array(root.coeffs, dtype=np.float64), root.depth, root.id, X, D, store.gram_array(), arith.eps
        )
        ids = frozenset(int(i) for i in hits)
    store.dominated[root.id] = ids
    store.dominated_count[root.id] = len(ids)
    return ids


def is_elementary(store: RootStore, x) -> bool:
    return not dominated_set(store, x)


def level_counts(store: RootStore, d: int) -> dict:
    """#D for every root of depth d, by brute-force scan over depth <= d."""
    store.ensure_depth(d)
    ids = store.levels[d - 1] if d <= store.depth else []
    todo = [i for i in ids if i not in store.dominated_count]
    if todo:
        arith = store.arithmetic
        if arith.exact:
            for i in todo:
                dominated_set(store, store.roots[i].coeffs)
        else:
            X, D = store.arrays()
            Q = X[todo]
            counts = kernels.dominated_counts(
                Q, D[todo], np.array(todo, dtype=np.intp), X, D, store.gram_array(), arith.eps,
                threads=store.threads,
            )
            for i, c in zip(todo, counts):
                store.dominated_count[i] = int(c)
    return {i: store.dominated_count[i] for i in ids}


def enumerate_Dn(store: RootStore, n_max: int) -> DnReport:
    """Level-synchronised computation of D_0 .. D_{n_max}.

    Stopping rule: if dep(r_a x) = dep(x) + 1 then (x, alpha_a) < 0, so
    alpha_a is not in D(x) and y -> r_a y injects D(x) into D(r_a x). Every
    root of depth d+1 arises this way from a root of depth d, hence #D never
    decreases along BFS edges, and once a whole level has min #D > n_max no
    deeper root can join D_0 .. D_{n_max}. Such a level exists because each
    D_n is finite.
    """
    if n_max < 0:
        raise InvalidArgument("n_max must be >= 0")
    sets = {n: set() for n in range(n_max + 1)}
    mismatches = []
    d = 0
    while True:
        store.ensure_depth(d + 1)
        if d + 1 > store.depth:
            break  # root system exhausted: the group is finite
        d += 1
        counts = level_counts(store, d)
        for rid, c in counts.items():
            if store.recurrence_count[rid] != c:
                mismatches.append((rid, c, store.recurrence_count[rid]))
            if c <= n_max:
                sets[c].add(rid)
        if min(counts.values()) > n_max:
            break
    return DnReport(
        sets={n: frozenset(s) for n, s in sets.items()},
        complete_up_to=n_max,
        depth_scanned=d,
        exhausted=store.exhausted,
        recurrence_mismatches=mismatches,
    )


def elementary_roots(store: RootStore) -> frozenset:
    return enumerate_Dn(store, 0).sets[0]


def _strictly_between_in_store(store, x, y):
    """Exhaustive search for z with x dom z dom y, z not in {x, y}.

    Normalised so x is positive. A positive z in between has depth at most
    dep(x); a negative z = -z' has -y dom z', so dep(z') <= dep(-y) (or z'
    would need y positive, impossible). The candidate set is finite.
    """
    rx, sx = store.locate(x)
    ry, sy = store.locate(y)
    if sx < 0:
        return _neg(_strictly_between_in_store(store, ry.coeffs, rx.coeffs))
    bound = max(rx.depth, ry.depth)
    xv = rx.coeffs
    yv = ry.coeffs if sy > 0 else negate(ry.coeffs)
    for r in store.roots_up_to(bound):
        for z in (r.coeffs, negate(r.coeffs)):
            if store.arithmetic.vectors_equal(z, xv) or store.arithmetic.vectors_equal(z, yv):
                continue
            if dominates(store, xv, z).holds and dominates(store, z, yv).holds:
                return z
    return None


def _neg(v):
    return None if v is None else negate(v)


def dominance_cover(store: RootStore, x, y) -> CoverResult:
    """Decide whether x dom y is a cover (nothing strictly in between).

    With w from the key-witness construction, the pair is a cover iff wx is
    elementary and -wy is elementary; otherwise a root of D(wx) (or of
    D(-wy)) pulled back by w^{-1} lies strictly between x and y. The answer
    is cross-checked by an exhaustive search of the store.
    """
    from .cone import key_witness  # cone depends on this module

    arith = store.arithmetic
    xv = tuple(arith.scalar(c) for c in x)
    yv = tuple(arith.scalar(c) for c in y)
    if arith.vectors_equal(xv, yv) or not dominates(store, xv, yv).holds:
        raise NotDominant("dominance_cover needs x dom y with x != y")
    w = key_witness(store, xv, yv)
    winv = w.inverse()
    wx = act(w, xv)
    mwy = negate(act(w, yv))
    between = None
    dx = dominated_set(store, wx)
    if dx:
        z = store.roots[min(dx)].coeffs
        between = act(winv, z)
    else:
        dy = dominated_set(store, mwy)
        if dy:
            z = store.roots[min(dy)].coeffs
            between = negate(act(winv, z))
    is_cover = between is None
    found = _strictly_between_in_store(store, xv, yv)
    if (found is None) != is_cover:
        raise CertificationFailed(
            f"cover decision {is_cover} disagrees with exhaustive store search (found {found})"
        )
    if between is not None:
        if not (dominates(store, xv, between).holds and dominates(store, between, yv).holds):
            raise CertificationFailed("between-certificate does not sit between x and y")
    return CoverResult(is_cover=is_cover, witness=w if is_cover else None, between=between, store_check=True)


def dominance_matrix(store: RootStore, d: int):
    """Dominance among all roots of depth <= d and their negatives.

    Returns ``(vectors, M)`` where vectors lists the positive roots then
    their negatives, and ``M[i, j]`` is True iff vectors[i] dom vectors[j].
    It is the same decision table as ``dominates``, evaluated in bulk.
    """
    store.ensure_depth(d)
    roots = store.roots_up_to(d)
    n = len(roots)
    arith = store.arithmetic
    dep = np.array([r.depth for r in roots])
    if arith.exact:
        one = arith.scalar(1)
        B = [[bilinear(store.datum, r.coeffs, q.coeffs) for q in roots] for r in roots]
        ge = np.array([[b >= one for b in row] for row in B], dtype=bool).reshape(n, n)
        le = np.array([[-b >= one for b in row] for row in B], dtype=bool).reshape(n, n)
    else:
        X = np.array([[float(c) for c in r.coeffs] for r in roots]).reshape(n, store.datum.rank)
        B = X @ store.gram_array() @ X.T
        ge = B >= 1 - arith.eps
        le = -B >= 1 - arith.eps
    pp = (ge & (dep[:, None] >= dep[None, :])) | np.eye(n, dtype=bool)
    pn = le
    M = np.zeros((2 * n, 2 * n), dtype=bool)
    M[:n, :n] = pp
    M[:n, n:] = pn
    M[n:, n:] = pp.T
    vectors = [r.coeffs for r in roots] + [negate(r.coeffs) for r in roots]
    return vectors, M
