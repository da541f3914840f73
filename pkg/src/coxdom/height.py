"""Standard height and infinity-height of reflections, and the sets T_n."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import mat_mul, matrices_equal, reflect, root_reflection_matrix
from .dihedral import decompose_reflections
from .dominance import dominated_set, enumerate_Dn
from .errors import InvalidArgument

VIA_DOMINANCE = "via-dominance"
VIA_DECOMPOSITION = "via-decomposition"


@dataclass
class HeightReport:
    reflection: int  # root id of alpha_t
    standard: int
    infinity: int  # #D(alpha_t)
    via_decomposition: int | None = None
    per_subsystem: list = field(default_factory=list)  # (DihedralSubsystem, height)
    window_depth: int | None = None
    methods_agree: bool | None = None
    consistent: bool = True


@dataclass
class TnReport:
    sets: dict  # n -> frozenset of root ids alpha_t
    dn: object  # the DnReport the sets come from

    def sizes(self):
        return {n: len(s) for n, s in self.sets.items()}


def _root(store, t):
    root, _ = store.locate(t)
    return root


def standard_height(store, t) -> int:
    """(l(t) - 1) / 2 = dep(alpha_t) - 1."""
    return _root(store, t).depth - 1


def widened_decomposition(store, t, start=None):
    """Decompose with a window widened (doubling) until the heights add up.

    The window never needs to pass l(t): N(t) lives at depth <= l(t).
    """
    root = _root(store, t)
    length = 2 * root.depth - 1
    bound = min(start or root.depth + 1, length)
    tried = []
    while True:
        dec = decompose_reflections(store, root.coeffs, bound)
        tried.append(bound)
        if dec.height_sum() == root.depth - 1 or bound >= length:
            return dec, tried
        bound = min(2 * bound, length)


def infinity_height(store, t, method="both") -> HeightReport:
    """h^inf(t), as #D(alpha_t) and/or summed over the infinite dihedral planes through alpha_t."""
    if method not in ("both", VIA_DOMINANCE, VIA_DECOMPOSITION):
        raise InvalidArgument(f"unknown method {method!r}")
    root = _root(store, t)
    report = HeightReport(root.id, root.depth - 1, len(dominated_set(store, root.coeffs)))
    if method == VIA_DOMINANCE:
        return report
    dec, tried = widened_decomposition(store, root.coeffs)
    report.window_depth = tried[-1]
    report.per_subsystem = [(g.subsystem, g.height) for g in dec.active]
    report.consistent = all(g.consistent for g in dec.active)
    report.via_decomposition = dec.infinity_sum()
    report.methods_agree = report.via_decomposition == report.infinity
    return report


def enumerate_Tn(store, n_max) -> TnReport:
    """T_n = {r_x : x in D_n}; the reflection is named by its root."""
    dn = enumerate_Dn(store, n_max)
    return TnReport(dict(dn.sets), dn)


def conjugate_decomposition(store, t, tn: TnReport, n):
    """(alpha_0, alpha') with t = r_{alpha_0} r_{alpha'} r_{alpha_0}, alpha_0 in D_0
    and alpha' in D_m for some m < n, or None."""
    d = store.datum
    x = store.roots[t].coeffs
    lower = set().union(*(tn.sets[m] for m in range(n)))
    for z in sorted(tn.sets[0]):
        a0 = store.roots[z].coeffs
        hit = store.find(reflect(d, x, a0))
        if hit is None or hit[0] not in lower:
            continue
        a1 = store.roots[hit[0]].coeffs
        r0 = root_reflection_matrix(d, a0)
        prod = mat_mul(mat_mul(r0, root_reflection_matrix(d, a1)), r0)
        if matrices_equal(store.arithmetic, prod, root_reflection_matrix(d, x)):
            return z, hit[0]
    return None


def verify_height_identities(store, max_length=15, n_max=3) -> dict:
    """Height sum over dihedral planes, the bound on #T_n and the t0 t' t0 form.

    (a) for l(t) <= max_length: h(t) = sum of plane heights, and both
        routes to h^inf agree;
    (b) for 0 <= n <= n_max and W infinite: 0 < #T_n, and for n >= 1
        #T_n <= (#T_0)^(n+1) - (#T_0)^n;
    (c) every t in T_n with n >= 1 is r_0 r' r_0 with r_0 in T_0 and
        r' in T_m, m < n.
    """
    max_depth = (max_length + 1) // 2
    store.ensure_depth(max_depth)
    a_rows = []
    for root in store.roots_up_to(max_depth):
        rep = infinity_height(store, root.coeffs)
        a_rows.append({
            "root": root.id,
            "standard": rep.standard,
            "height_sum": sum(h for _, h in rep.per_subsystem),
            "infinity": rep.infinity,
            "via_decomposition": rep.via_decomposition,
            "window_depth": rep.window_depth,
            "certified": all(s.certified for s, _ in rep.per_subsystem) and rep.consistent,
            "ok": rep.methods_agree and sum(h for _, h in rep.per_subsystem) == rep.standard,
        })

    tn = enumerate_Tn(store, n_max)
    sizes = tn.sizes()
    finite = store.exhausted
    t0 = sizes[0]
    b_rows = []
    for n in range(n_max + 1):
        if finite:
            b_rows.append({"n": n, "size": sizes[n], "bound": None, "ok": True, "skipped": True})
            continue
        bound = t0 ** (n + 1) - t0**n if n >= 1 else None
        ok = sizes[n] > 0 and (bound is None or sizes[n] <= bound)
        b_rows.append({"n": n, "size": sizes[n], "bound": bound, "ok": ok, "skipped": False})

    c_rows = []
    for n in range(1, n_max + 1):
        for t in sorted(tn.sets[n]):
            found = conjugate_decomposition(store, t, tn, n)
            c_rows.append({"n": n, "root": t, "t0": found and found[0], "t_prime": found and found[1],
                           "ok": found is not None})

    return {
        "a": a_rows,
        "b": b_rows,
        "c": c_rows,
        "finite_group": finite,
        "ok": all(r["ok"] for r in a_rows + b_rows + c_rows),
    }

