"""Maximal dihedral reflection subgroups and their canonical roots.

The maximal dihedral reflection subgroup containing two roots x, y is
generated by the reflections in the roots of the plane spanned by x and y.
Its canonical pair is found exactly, by conjugating the plane with simple
reflections until simple roots show up in it, and then certified against
the enumerated store.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .core import (
    INF,
    MAX_FINITE_LABEL,
    bilinear,
    chain_coefficients,
    negate,
    pairings,
    reflect,
    reflect_simple,
    vector_sign,
)
from .errors import CertificationFailed, FiniteSubsystem, NotInSubsystem, NotIndependent
from .roots import descent_path, inversion_roots, inversion_set, reflection_word
from .scalar import Ordering, ToleranceIndex

MAX_RETRIES = 4
DESCENT_CAP = 100_000


@dataclass
class DihedralSubsystem:
    alpha: tuple
    beta: tuple
    kind: str  # "finite" or "infinite"
    m: int | None
    theta: float
    cosh_theta: object  # -(alpha, beta), exact under the rational backend
    plane_basis: tuple
    certified: bool
    window_depth: int
    diagnostics: list = field(default_factory=list)
    arithmetic: object = field(default=None, repr=False, compare=False)
    datum: object = field(default=None, repr=False, compare=False)

    @property
    def canonical_pair(self):
        return self.alpha, self.beta

    @property
    def infinite(self):
        return self.kind == "infinite"

    def same_as(self, other):
        eq = self.arithmetic.vectors_equal
        return eq(self.alpha, other.alpha) and eq(self.beta, other.beta)


# -- plane geometry ---------------------------------------------------------

def plane_coordinates(arith, u, w, v):
    """(s, t) with v = s u + t w, or None if v is off the plane.

    Solved by least squares in coefficient space; exact for rationals.
    """
    uu = sum(a * a for a in u)
    ww = sum(a * a for a in w)
    uw = sum(a * b for a, b in zip(u, w))
    uv = sum(a * b for a, b in zip(u, v))
    wv = sum(a * b for a, b in zip(w, v))
    det = uu * ww - uw * uw
    if arith.exact:
        if det == 0:
            raise NotIndependent("basis vectors are parallel")
    elif abs(det) <= 1e-12 * uu * ww:
        raise NotIndependent("basis vectors are parallel")
    s = (uv * ww - wv * uw) / det
    t = (wv * uu - uv * uw) / det
    fit = tuple(s * a + t * b for a, b in zip(u, w))
    if not arith.vectors_equal(fit, v):
        return None
    return s, t


def _parallel(arith, u, v):
    if arith.exact:
        return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u)))
    uu = sum(a * a for a in u)
    vv = sum(a * a for a in v)
    uv = sum(a * b for a, b in zip(u, v))
    return abs(uu * vv - uv * uv) <= 1e-12 * uu * vv


def _positive(arith, v):
    return v if vector_sign(arith, v) > 0 else negate(v)


def _simple_index(arith, v):
    """Index a if v is the simple root alpha_a, else None."""
    nz = [i for i, c in enumerate(v) if not arith.is_zero(c)]
    if len(nz) == 1 and arith.compare(v[nz[0]], arith.scalar(1)) == Ordering.EQUAL:
        return nz[0]
    return None


def _first_positive_pairing(d, v):
    for a, p in enumerate(pairings(d, v)):
        if d.arithmetic.sign(p) > 0:
            return a
    raise CertificationFailed("positive root without a descent")  # pragma: no cover


# -- canonical pair ---------------------------------------------------------

def canonical_pair(d, x, y):
    """Canonical roots of the maximal dihedral subgroup containing r_x, r_y.

    If alpha_s is not in the plane then r_s permutes the positive roots of
    the plane's subsystem into those of its conjugate, and conjugation maps
    canonical roots to canonical roots. A simple root lying in the plane is
    always canonical. Both facts drive a descent that terminates because
    the depth of the tracked plane root drops at every step.
    """
    arith = d.arithmetic
    p, q = _positive(arith, x), _positive(arith, y)
    if _parallel(arith, p, q):
        raise NotIndependent("x and y are parallel")
    conj = []

    def in_plane(v):
        return plane_coordinates(arith, p, q, v) is not None

    def conjugate(s):
        nonlocal p, q
        conj.append(s)
        p, q = reflect_simple(d, p, s), reflect_simple(d, q, s)

    # stage 1: find a simple root in a conjugate of the plane
    z = p
    for _ in range(DESCENT_CAP):
        a = _simple_index(arith, z)
        if a is not None:
            break
        s = _first_positive_pairing(d, z)
        if in_plane(d.simple_root(s)):
            a = s
            break
        conjugate(s)
        z = reflect_simple(d, z, s)
    else:  # pragma: no cover
        raise CertificationFailed("canonical descent did not terminate")
    a_cur = d.simple_root(a)

    # stage 2: the second canonical root
    z2 = q if not _parallel(arith, q, a_cur) else p
    z2 = _positive(arith, z2)
    for _ in range(DESCENT_CAP):
        if _simple_index(arith, z2) is not None:
            b_cur = z2
            break
        t = _first_positive_pairing(d, z2)
        at = d.simple_root(t)
        if arith.vectors_equal(at, a_cur):
            z2 = reflect_simple(d, z2, t)
        elif in_plane(at):
            b_cur = at
            break
        else:
            conjugate(t)
            a_cur = reflect_simple(d, a_cur, t)
            z2 = reflect_simple(d, z2, t)
    else:  # pragma: no cover
        raise CertificationFailed("canonical descent did not terminate")

    for s in reversed(conj):
        a_cur = reflect_simple(d, a_cur, s)
        b_cur = reflect_simple(d, b_cur, s)
    zero = arith.scalar(0)  # also clears float -0.0
    pair = sorted([tuple(c + zero for c in a_cur), tuple(c + zero for c in b_cur)], reverse=True)
    return pair[0], pair[1]


def classify(arith, ab):
    """(kind, m, theta, cosh_theta) from the product (a, b) of a canonical pair."""
    one = arith.scalar(1)
    if arith.compare(-ab, one) != Ordering.LESS:
        ch = -ab
        if arith.compare(ch, one) == Ordering.EQUAL:
            return "infinite", None, 0.0, ch
        return "infinite", None, math.acosh(float(ch)), ch
    if arith.exact:
        for m in (2, 3):
            if ab == -arith.cos_pi_over(m):
                return "finite", m, math.pi / m, -ab
        raise CertificationFailed(f"(a, b) = {ab} is not -cos(pi/m) for any m")
    c = -float(ab)
    if -arith.eps <= c < 1:
        m_est = math.pi / math.acos(min(1.0, max(-1.0, c)))
        for m in {max(2, math.floor(m_est)), math.ceil(m_est)}:
            if 2 <= m <= MAX_FINITE_LABEL and abs(math.cos(math.pi / m) - c) <= arith.eps * 10:
                return "finite", m, math.pi / m, -ab
    raise CertificationFailed(f"(a, b) = {ab!r} is not -cos(pi/m) for m <= {MAX_FINITE_LABEL}")


def _cocycle_ok(d, c, plane):
    """N(r_c) meets the plane only in c, which characterises the canonical roots."""
    arith = d.arithmetic
    path, b, _ = descent_path(d, c)
    word = tuple(path) + (b,) + tuple(reversed(path))
    hits = [v for v in inversion_roots(d, word) if plane_coordinates(arith, *plane, v) is not None]
    return len(hits) == 1 and arith.vectors_equal(hits[0], c)


def _extreme_rays(coords):
    """Indices of the two boundary rays of a pointed cone of plane vectors."""
    pts = [(float(s), float(t)) for s, t in coords]
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    angles = [math.atan2(sx * p[1] - sy * p[0], sx * p[0] + sy * p[1]) for p in pts]
    return angles.index(min(angles)), angles.index(max(angles))


def _generated_positive(sub, bound_coeff):
    """Plane coordinates (s, t) over (alpha, beta) of the positive roots of
    the subsystem, up to coefficient size ``bound_coeff`` in the infinite case."""
    arith = sub.arithmetic
    if sub.infinite:
        out = []
        n = 2
        while True:
            c = chain_coefficients(sub.cosh_theta, n, arith)
            if float(c[-1]) > bound_coeff + 1 or n > 10_000:
                break
            n *= 2
        for i in range(len(c) - 1):
            out.append((c[i + 1], c[i]))
            out.append((c[i], c[i + 1]))
        return out
    return [plane_coordinates(arith, sub.alpha, sub.beta, v) for v in finite_orbit(sub)]


def finite_orbit(sub):
    """v_0 = a, v_1 = r_a b, v_2 = r_a r_b a, ..., v_{m-1} = b."""
    d = sub.datum
    a, b = sub.alpha, sub.beta
    out = []
    for j in range(sub.m):
        v = a if j % 2 == 0 else b
        for k in range(j):
            v = reflect(d, v, a if (j - k) % 2 == 1 else b)
        out.append(v)
    return out


def window_plane_coordinates(store, u, w, bound):
    """Plane coordinates over (u, w) of the store roots of depth <= bound in that plane."""
    arith = store.arithmetic
    if arith.exact:
        out = []
        for r in store.roots_up_to(bound):
            st = plane_coordinates(arith, u, w, r.coeffs)
            if st is not None:
                out.append(st)
        return out
    X, D = store.arrays()
    X = X[D <= bound]
    B = np.array([[float(c) for c in u], [float(c) for c in w]])
    C = X @ np.linalg.pinv(B)
    fit = C @ B
    tol = arith.eps * np.maximum(1.0, np.maximum(np.abs(fit), np.abs(X)))
    hit = (np.abs(fit - X) <= tol).all(axis=1)
    return [(float(s), float(t)) for s, t in C[hit]]


def _cache(store):
    cache = getattr(store, "_dihedral_cache", None)
    if cache is None:
        cache = store._dihedral_cache = ToleranceIndex(store.arithmetic)
    return cache


def maximal_dihedral(store, x, y, max_retries=MAX_RETRIES):
    """The maximal dihedral reflection subgroup containing r_x and r_y.

    Results are cached on the store by canonical pair.
    """
    d = store.datum
    arith = store.arithmetic
    rx, _ = store.locate(x)
    ry, _ = store.locate(y)
    if rx.id == ry.id:
        raise NotIndependent("x and y span a line, not a plane")
    a, b = canonical_pair(d, rx.coeffs, ry.coeffs)
    cache = _cache(store)
    hit = cache.get(a + b)
    if hit is not None:
        return hit
    ab = bilinear(d, a, b)
    kind, m, theta, ch = classify(arith, ab)
    sub = DihedralSubsystem(
        alpha=a, beta=b, kind=kind, m=m, theta=theta, cosh_theta=ch,
        plane_basis=(rx.coeffs, ry.coeffs), certified=False, window_depth=0,
        arithmetic=arith, datum=d,
    )
    certify(store, sub, rx.depth + ry.depth, max_retries)
    cache.add(a + b, sub)
    return sub


def certify(store, sub, bound, max_retries=MAX_RETRIES):
    """Pairing condition, cocycle test and a regeneration check on the store window."""
    d = store.datum
    arith = store.arithmetic
    plane = (sub.alpha, sub.beta)
    notes = sub.diagnostics
    ok = _cocycle_ok(d, sub.alpha, plane) and _cocycle_ok(d, sub.beta, plane)
    if not ok:
        notes.append("cocycle test failed")
    da = store.locate(sub.alpha)[0].depth
    db = store.locate(sub.beta)[0].depth
    for attempt in range(max_retries + 1):
        if bound >= max(da, db):
            break
        notes.append(f"canonical roots deeper than window {bound}; widening")
        bound *= 2
    else:
        notes.append("retry cap reached before the window covered the canonical roots")
        sub.window_depth = bound
        sub.certified = False
        return sub
    store.ensure_depth(bound)
    coords = window_plane_coordinates(store, sub.alpha, sub.beta, bound)
    big = max(max(float(s), float(t)) for s, t in coords)
    gen = ToleranceIndex(arith)
    for st in _generated_positive(sub, big):
        gen.add(st, True)
    for st in coords:
        if st not in gen:
            ok = False
            notes.append(f"plane root with coordinates {st} not regenerated by the pair")
            break
    lo, hi = _extreme_rays(coords)
    rays = sorted([coords[lo], coords[hi]], reverse=True)
    one, zero = arith.scalar(1), arith.scalar(0)
    if not (arith.vectors_equal(rays[0], (one, zero)) and arith.vectors_equal(rays[1], (zero, one))):
        ok = False
        notes.append("extreme rays of the window disagree with the canonical pair")
    sub.window_depth = bound
    sub.certified = ok
    return sub


# -- chains and heights -----------------------------------------------------

def chain_root(sub, side, i):
    """c_{i+1} a + c_i b (side "alpha") or c_i a + c_{i+1} b (side "beta")."""
    if not sub.infinite:
        raise FiniteSubsystem("chain roots exist only for infinite subsystems")
    if side not in ("alpha", "beta"):
        raise ValueError(f"side must be 'alpha' or 'beta', not {side!r}")
    c = chain_coefficients(sub.cosh_theta, i + 2, sub.arithmetic)
    ca, cb = (c[i + 1], c[i]) if side == "alpha" else (c[i], c[i + 1])
    return tuple(ca * p + cb * q for p, q in zip(sub.alpha, sub.beta))


def chain_position(sub, x):
    """(side, i) with x = chain_root(sub, side, i)."""
    arith = sub.arithmetic
    st = plane_coordinates(arith, sub.alpha, sub.beta, x)
    if st is None or arith.sign(st[0]) < 0 or arith.sign(st[1]) < 0:
        raise NotInSubsystem("not a positive root of the subsystem")
    s, t = st
    top = max(float(s), float(t))
    c = chain_coefficients(sub.cosh_theta, 2, arith)
    i = 0
    while True:
        if i + 1 >= len(c):
            c = chain_coefficients(sub.cosh_theta, 2 * len(c), arith)
        if arith.vectors_equal((s, t), (c[i + 1], c[i])):
            return "alpha", i
        if arith.vectors_equal((s, t), (c[i], c[i + 1])):
            return "beta", i
        if float(c[i]) > top + 1:
            raise NotInSubsystem("coordinates match no chain root")
        i += 1


def subsystem_height(sub, x):
    """Height of r_x in the subsystem: (l'(r_x) - 1) / 2 for its own length l'."""
    x = _positive(sub.arithmetic, tuple(sub.arithmetic.scalar(c) for c in x))
    if sub.infinite:
        return chain_position(sub, x)[1]
    for j, v in enumerate(finite_orbit(sub)):
        if sub.arithmetic.vectors_equal(v, x):
            return min(j, sub.m - 1 - j)
    raise NotInSubsystem("not a positive root of the subsystem")


def dominance_chains(sub, k, store=None):
    """First k elements of the two dominance chains, each read downwards.

    chain one: ..., r_a r_b (a), r_a (b), a, -b, r_b(-a), ...
    chain two is the same with a and b swapped. With a store, every
    consecutive pair is checked to be in dominance.
    """
    if not sub.infinite:
        raise FiniteSubsystem("dominance chains exist only for infinite subsystems")
    c = chain_coefficients(sub.cosh_theta, k + 2, sub.arithmetic)
    zero = sub.arithmetic.scalar(0)
    chains = []
    for a, b in ((sub.alpha, sub.beta), (sub.beta, sub.alpha)):
        pos = [tuple(c[j + 1] * p + c[j] * q for p, q in zip(a, b)) for j in range((k + 1) // 2)]
        neg = [tuple(-(c[j] * p + c[j + 1] * q) + zero for p, q in zip(a, b)) for j in range(k // 2)]
        chains.append(list(reversed(pos)) + neg)
    if store is not None:
        from .dominance import dominates

        for chain in chains:
            for u, v in zip(chain, chain[1:]):
                if not dominates(store, u, v).holds:
                    raise CertificationFailed("consecutive chain elements are not in dominance")
    return chains[0], chains[1]


def _precise_gram(d, ctx):
    n = d.rank
    G = ctx.matrix(n, n)
    for i in range(n):
        G[i, i] = 1
    for (i, j), m in d.bonds.items():
        if m == INF:
            v = d.infinity_values.get((i, j), -1)
            v = ctx.mpf(v.numerator) / v.denominator if hasattr(v, "denominator") else ctx.mpf(v)
        elif m == 2:
            v = 0
        else:
            v = -ctx.cos(ctx.pi / m)
        G[i, j] = G[j, i] = v
    return G


def _precise_root(d, G, ctx, x):
    """x rebuilt from its descent word, so only the form entries are rounded."""
    path, b, sign = descent_path(d, x)
    v = ctx.matrix(d.rank, 1)
    v[b] = sign
    for a in reversed(path):
        v[a] -= 2 * sum(G[a, k] * v[k] for k in range(d.rank))
    return v


def chain_residuals(sub, n_max=6, digits=50):
    """Largest deviation from the chain product formulas, at high precision.

    Checks (x_n, x_m) = cosh((n - m) theta) and (x_n, y_m) = -cosh((n + m + 1) theta)
    for the alpha-side chain roots x_i and beta-side roots y_i, i <= n_max. Chain
    coefficients grow like cosh(i theta), so in double precision the products
    lose digits to cancellation; here everything runs with ``digits`` digits.
    """
    if not sub.infinite:
        raise FiniteSubsystem("chain roots exist only for infinite subsystems")
    ctx = mpmath.mp.clone()
    ctx.dps = digits
    d = sub.datum
    G = _precise_gram(d, ctx)
    a, b = (_precise_root(d, G, ctx, v) for v in (sub.alpha, sub.beta))
    ch = -(a.T * G * b)[0]
    c = [ctx.mpf(0), ctx.mpf(1)]
    while len(c) < n_max + 3:
        c.append(2 * ch * c[-1] - c[-2])
    alpha = [c[i + 1] * a + c[i] * b for i in range(n_max + 1)]
    beta = [c[i] * a + c[i + 1] * b for i in range(n_max + 1)]
    theta = ctx.acosh(ch)
    worst = ctx.mpf(0)
    for n in range(n_max + 1):
        for m in range(n_max + 1):
            same = (alpha[n].T * G * alpha[m])[0] - ctx.cosh((n - m) * theta)
            cross = (alpha[n].T * G * beta[m])[0] + ctx.cosh((n + m + 1) * theta)
            worst = max(worst, abs(same), abs(cross))
    return float(worst)


# -- decomposition of the reflections around t --------------------------------

@dataclass
class PlaneGroup:
    roots: list  # ids of window roots y != x in this plane
    inversions: list  # those ids lying in N(r_x)
    subsystem: DihedralSubsystem | None = None
    height: int = 0
    kind: str | None = None
    consistent: bool = True  # chain height agrees with the plane's share of N(r_x)


@dataclass
class Decomposition:
    root: int
    window_depth: int
    planes: list
    inversion_count: int

    @property
    def active(self):
        return [p for p in self.planes if p.inversions]

    def height_sum(self):
        return sum(p.height for p in self.planes)

    def infinity_sum(self):
        return sum(p.height for p in self.planes if p.kind == "infinite")


def _plane_keys(arith, x, Y):
    """A key per row of Y identifying the plane spanned with x."""
    if arith.exact:
        xx = sum(a * a for a in x)
        keys = []
        for y in Y:
            c = sum(a * b for a, b in zip(x, y)) / xx
            p = [b - c * a for a, b in zip(x, y)]
            lead = next(v for v in p if v != 0)
            keys.append(tuple(v / lead for v in p))
        return keys
    xv = np.array([float(a) for a in x])
    Yv = np.array([[float(a) for a in y] for y in Y]).reshape(len(Y), len(x))
    P = Yv - np.outer(Yv @ xv / (xv @ xv), xv)
    P /= np.linalg.norm(P, axis=1)[:, None]
    lead = np.argmax(np.abs(P) > 1e-6, axis=1)
    P *= np.sign(P[np.arange(len(P)), lead])[:, None]
    # bucketed at 1e-6: a plane split by round-off would surface as a
    # height/inversion mismatch in the active planes
    return [tuple(row) for row in np.rint(P * 1e6).astype(np.int64).tolist()]


def decompose_reflections(store, x, depth_bound=None):
    """Group the window roots y != x by the maximal dihedral plane through x.

    Subsystems are only computed for planes meeting N(r_x) beyond x; in the
    remaining planes x is canonical and r_x has height 0.
    """
    root, _ = store.locate(x)
    x = root.coeffs
    length = 2 * root.depth - 1
    if depth_bound is None:
        depth_bound = length
    store.ensure_depth(max(depth_bound, length))
    others = [r for r in store.roots_up_to(depth_bound) if r.id != root.id]
    inv = inversion_set(reflection_word(store, x), store) - {root.id}
    index = {}
    planes = []
    for r, key in zip(others, _plane_keys(store.arithmetic, x, [r.coeffs for r in others]) if others else []):
        j = index.get(key)
        if j is None:
            j = index[key] = len(planes)
            planes.append(PlaneGroup([], []))
        planes[j].roots.append(r.id)
        if r.id in inv:
            planes[j].inversions.append(r.id)
    for g in planes:
        if not g.inversions:
            continue
        sub = maximal_dihedral(store, x, store.roots[g.roots[0]].coeffs)
        g.subsystem = sub
        g.kind = sub.kind
        g.height = subsystem_height(sub, x)
        # l'(r_x) = #(N(r_x) in the plane), all of which sits at depth <= l(r_x)
        n = len(g.inversions)
        g.consistent = n == 2 * g.height if depth_bound >= length else n <= 2 * g.height
    return Decomposition(root.id, depth_bound, planes, len(inv))


def plane_subsystem(store, x, group):
    """Subsystem of a plane group, computed on demand."""
    if group.subsystem is None:
        group.subsystem = maximal_dihedral(store, x, store.roots[group.roots[0]].coeffs)
        group.kind = group.subsystem.kind
    return group.subsystem
