"""Imaginary cone and Tits-dual membership for root differences and vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import negate, pairings, reflect, reflect_simple, vector_sign
from .dominance import dominance_matrix, dominates
from .errors import CapExceeded, DimensionMismatch, NotDominant
from .roots import act, elements_up_to_length, identity, reduce_word, reflection_word

MEMBER = "member"
NOT_MEMBER = "not_member"
INCONCLUSIVE = "inconclusive"
DEFAULT_CAP = 10_000


@dataclass
class ConeVerdict:
    status: str
    witness: object = None  # GroupElement
    certificate: str = ""

    @property
    def member(self):
        return self.status == MEMBER


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _dihedral_mover(store, x, y, cap):
    """u in <r_x, r_y> with ux positive and uy negative (breadth first)."""
    d = store.datum
    arith = store.arithmetic
    for k in range(cap + 1):
        for first in (0, 1) if k else (0,):
            seq = [x if (i + first) % 2 == 0 else y for i in range(k)]
            ux, uy = x, y
            for r in reversed(seq):
                ux, uy = reflect(d, ux, r), reflect(d, uy, r)
            if vector_sign(arith, ux) > 0 and vector_sign(arith, uy) < 0:
                word = ()
                for r in seq:
                    word += reflection_word(store, r).word
                return reduce_word(d, word)
    raise CapExceeded(f"no element of <r_x, r_y> of length <= {cap} separates x and y")


def key_witness(store, x, y, cap=DEFAULT_CAP, check=True):
    """w with wx positive, wy negative and (w(x - y), alpha_c) <= 0 for all simple c.

    First u in the dihedral group <r_x, r_y> makes ux positive and uy
    negative; then a = ux and b = -uy are canonical for the subgroup they
    generate, since (a, b) = -(x, y) <= -1. While some simple root pairs
    positively with a + b, reflect both: the coefficient sum of a + b
    strictly drops, so the loop ends.
    """
    d = store.datum
    arith = store.arithmetic
    x = tuple(arith.scalar(c) for c in x)
    y = tuple(arith.scalar(c) for c in y)
    if arith.vectors_equal(x, y) or (check and not dominates(store, x, y).holds):
        raise NotDominant("key_witness needs x dom y with x != y")
    u = _dihedral_mover(store, x, y, cap)
    a, b = act(u, x), negate(act(u, y))
    steps = []
    for _ in range(cap):
        p = pairings(d, _add(a, b))
        c = next((i for i, v in enumerate(p) if arith.sign(v) > 0), None)
        if c is None:
            break
        a, b = reflect_simple(d, a, c), reflect_simple(d, b, c)
        if vector_sign(arith, a) <= 0 or vector_sign(arith, b) <= 0:  # pragma: no cover
            raise CapExceeded("reflection left the positive roots; this indicates a bug")
        steps.append(c)
    else:
        raise CapExceeded(f"key-witness loop exceeded {cap} steps; this indicates a bug")
    w = reduce_word(d, tuple(reversed(steps)) + u.word)
    return w


def witness_ok(store, w, x, y):
    """wx positive, wy negative and w(x - y) pairing <= eps with every simple root."""
    arith = store.arithmetic
    v = act(w, _sub(x, y))
    return (
        vector_sign(arith, act(w, x)) > 0
        and vector_sign(arith, act(w, y)) < 0
        and all(arith.sign(p) <= 0 for p in pairings(store.datum, v))
    )


def imaginary_cone_contains(store, v=None, x=None, y=None, cap=DEFAULT_CAP) -> ConeVerdict:
    """Membership in the imaginary cone Q.

    Root differences (x, y given): x - y is in Q exactly when x dominates y.
    General vectors: descend by simple reflections while some simple root
    pairs positively. Ending inside the fundamental part (coefficients >= 0,
    all simple pairings <= 0) proves membership; leaving the positive
    coefficient cone disproves it, as Q is W-stable and lies in that cone.
    """
    d = store.datum
    arith = store.arithmetic
    if x is not None or y is not None:
        x = tuple(arith.scalar(c) for c in x)
        y = tuple(arith.scalar(c) for c in y)
        verdict = dominates(store, x, y)
        if not verdict.holds:
            return ConeVerdict(NOT_MEMBER, None, f"x does not dominate y ({verdict.reason})")
        if arith.vectors_equal(x, y):
            return ConeVerdict(MEMBER, identity(d), "zero vector")
        w = key_witness(store, x, y, cap)
        return ConeVerdict(MEMBER, w, "w(x - y) pairs non-positively with every simple root")
    if len(v) != d.rank:
        raise DimensionMismatch(f"vector of length {len(v)} for rank {d.rank}")
    v = tuple(arith.scalar(c) for c in v)
    if arith.exact:
        status, word, final = _descent_exact(d, v, cap)
    else:
        status, final, word = kernels.cone_descent(np.array(v, dtype=np.float64), store.gram_array(), cap, arith.eps)
    w = reduce_word(d, tuple(reversed(word)))
    if status == 0:
        return ConeVerdict(MEMBER, w, "w v has coefficients >= 0 and pairs non-positively with every simple root")
    if status == 1:
        return ConeVerdict(NOT_MEMBER, w, "w v has a negative coefficient, so v lies outside the Tits dual")
    return ConeVerdict(INCONCLUSIVE, None, f"descent did not settle within {cap} steps")


def _descent_exact(d, v, cap):
    arith = d.arithmetic
    word = []
    if any(arith.sign(c) < 0 for c in v):
        return 1, word, v
    while True:
        p = pairings(d, v)
        a = next((i for i, q in enumerate(p) if arith.sign(q) > 0), None)
        if a is None:
            return 0, word, v
        if len(word) >= cap:
            return 2, word, v
        v = reflect_simple(d, v, a)
        word.append(a)
        if arith.sign(v[a]) < 0:
            return 1, word, v


def tits_dual_contains(store, x, y, max_length=6, check=True):
    """x - y in U*, which for roots is again x dom y.

    With ``check`` the answer is compared against the direct test that
    w(x - y) stays coefficient-nonnegative for all w of length <= max_length
    (only a necessary condition when the answer is yes).
    """
    arith = store.arithmetic
    holds = dominates(store, x, y).holds
    if check and holds:
        v = _sub(tuple(arith.scalar(c) for c in x), tuple(arith.scalar(c) for c in y))
        for g in elements_up_to_length(store.datum, max_length):
            if any(arith.sign(c) < 0 for c in act(g, v)):
                raise NotDominant("dominance holds but a short element sends x - y out of P")
    return holds


def lemma_samples(store, witnesses):
    """Vectors with coefficients >= 0 and all simple pairings <= 0: the
    w(x - y) from key witnesses plus pairwise sums, and 0."""
    d = store.datum
    out = [d.zero_vector()]
    vs = [act(w, _sub(x, y)) for w, x, y in witnesses]
    out.extend(vs)
    out.extend(_add(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])
    return out


def verify_cone_identities(store, max_depth=6, max_length=4, cap=DEFAULT_CAP) -> dict:
    """Key witnesses for dominated pairs, rejection of non-dominance pairs,
    and wv - v >= 0 for fundamental-cone samples v and l(w) <= max_length."""
    arith = store.arithmetic
    d = store.datum
    vecs, M = dominance_matrix(store, max_depth)
    G = store.gram_array()
    F = np.array([[float(c) for c in v] for v in vecs])
    below_one = (F @ G @ F.T) < 1 - arith.eps
    dominated = rejected = 0
    failures = []
    witnesses = []
    for i, x in enumerate(vecs):
        for j, y in enumerate(vecs):
            if i == j:
                continue
            if M[i, j]:
                w = key_witness(store, x, y, cap, check=False)
                dominated += 1
                if witness_ok(store, w, x, y):
                    if len(witnesses) < 64:
                        witnesses.append((w, x, y))
                else:
                    failures.append(("key_witness", x, y))
            elif below_one[i, j]:
                rejected += 1
                if imaginary_cone_contains(store, _sub(x, y), cap=cap).status != NOT_MEMBER:
                    failures.append(("imaginary_cone", x, y))
    samples = lemma_samples(store, witnesses)
    elements = elements_up_to_length(store.datum, max_length)
    if arith.exact:
        bad = [(v, g) for v in samples for g in elements
               if any(arith.sign(c) < 0 for c in _sub(act(g, v), v))]
    else:
        E = np.array([g.matrix for g in elements], dtype=float)
        S = np.array(samples, dtype=float).reshape(len(samples), d.rank)
        low = (np.einsum("kij,sj->ski", E, S) - S[:, None, :] < -arith.eps).any(axis=2)
        bad = [(samples[i], elements[k]) for i, k in zip(*np.nonzero(low))]
    seen = set()
    for v, g in bad:  # first offending element per sample
        if v not in seen:
            seen.add(v)
            failures.append(("fundamental_cone", v, g.word))
    lemma_ok = not bad
    return {
        "dominated_pairs": dominated,
        "rejected_pairs": rejected,
        "samples": len(samples),
        "elements": len(elements),
        "failures": failures,
        "ok": not failures and lemma_ok,
    }
