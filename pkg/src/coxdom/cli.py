"""Command-line front end.

Every command loads one datum file and prints a single JSON document with
the command echo, the datum fingerprint, results, caveats and a status.
Indices are 1-based on the command line and in the output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import kernels
from .cone import INCONCLUSIVE, imaginary_cone_contains, key_witness, tits_dual_contains, verify_cone_identities
from .core import bilinear, load_datum_file, root_reflection_matrix, validate_datum, vector_sign
from .dihedral import chain_root, decompose_reflections, dominance_chains, maximal_dihedral, subsystem_height
from .dominance import dominance_cover, dominated_set, dominates, enumerate_Dn
from .errors import CoxdomError, InvalidArgument
from .height import enumerate_Tn, infinity_height, verify_height_identities
from .roots import RootStore, act, element_from_word, parse_word, reflection_word

COMMANDS = (
    "validate", "roots", "dominates", "dn", "small-roots", "height", "tn",
    "decompose", "chains", "cone", "witness", "verify", "report",
)
# options that do not change the result and so stay out of the echo
_NOT_ECHOED = {"threads", "pretty", "timing", "command"}


class Context:
    def __init__(self, args):
        self.args = args
        self.datum = load_datum_file(args.datum, backend=args.backend, eps=args.epsilon)
        self.arith = self.datum.arithmetic
        self.store = RootStore(self.datum, threads=args.threads)
        self.caveats = []

    def vec(self, v):
        return [self.arith.export(c) for c in v]

    def parse_vec(self, text, name):
        if text is None:
            raise InvalidArgument(f"--{name} is required")
        try:
            v = tuple(self.arith.scalar(t) for t in text.split(","))
        except (ValueError, ZeroDivisionError):
            raise InvalidArgument(f"--{name}: cannot parse {text!r}") from None
        return v

    def root(self, rid):
        r = self.store.roots[rid]
        return {"root": self.vec(r.coeffs), "depth": r.depth}

    def reflection(self, rid):
        r = self.store.roots[rid]
        return {"root": self.vec(r.coeffs), "word": reflection_word(self.store, r.coeffs).word_1based()}

    def note(self, text):
        if text not in self.caveats:
            self.caveats.append(text)

    def window_caveat(self):
        if not self.store.exhausted:
            self.note(f"positive roots enumerated to depth {self.store.depth}; the root system is infinite")


def reflection_from_word(ctx, text):
    """Positive root of the reflection named by a word, or an error if it is not one."""
    g = element_from_word(ctx.datum, parse_word(text))
    n = ctx.datum.rank
    one, zero = ctx.arith.scalar(1), ctx.arith.scalar(0)
    diff = [[(one if i == j else zero) - g.matrix[i][j] for j in range(n)] for i in range(n)]
    # I - r_x = 2 x (Gx)^T has rank one; any nonzero column is a multiple of x
    col = next((j for j in range(n) if any(not ctx.arith.is_zero(diff[i][j]) for i in range(n))), None)
    if col is None:
        raise InvalidArgument(f"word {text!r} is the identity, not a reflection")
    v = tuple(diff[i][col] for i in range(n))
    if vector_sign(ctx.arith, v) < 0:
        v = tuple(-c for c in v)
    try:
        root, _ = ctx.store.locate(_unit(ctx, v))
    except CoxdomError:
        raise InvalidArgument(f"word {text!r} is not a reflection") from None
    if not all(ctx.arith.vectors_equal(a, b) for a, b in zip(root_reflection_matrix(ctx.datum, root.coeffs), g.matrix)):
        raise InvalidArgument(f"word {text!r} is not a reflection")
    return root.coeffs


def _unit(ctx, v):
    q = bilinear(ctx.datum, v, v)
    if not ctx.arith.sign(q) > 0:
        raise InvalidArgument("not a reflection")
    if ctx.arith.exact:
        # a root of a reflection is v / sqrt(q); q must be a rational square here
        num, den = q.numerator, q.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            raise InvalidArgument("not a reflection")
        s = ctx.arith.scalar(rn) / rd
    else:
        s = float(q) ** 0.5
    return tuple(c / s for c in v)


def _isqrt_exact(n):
    r = math.isqrt(n)
    return r if r * r == n else None


def target_root(ctx):
    if ctx.args.word is not None:
        return reflection_from_word(ctx, ctx.args.word)
    return ctx.parse_vec(ctx.args.x, "x")


# -- commands --------------------------------------------------------------

def cmd_validate(ctx):
    return validate_datum(ctx.datum)


def cmd_roots(ctx):
    depth = ctx.args.depth or 3
    ctx.store.ensure_depth(depth)
    roots = ctx.store.roots_up_to(depth)
    if ctx.store.exhausted:
        ctx.note("root system exhausted: the group is finite")
    else:
        ctx.window_caveat()
    return {"count": len(roots), "roots": [ctx.root(r.id) for r in roots]}


def cmd_dominates(ctx):
    x, y = ctx.parse_vec(ctx.args.x, "x"), ctx.parse_vec(ctx.args.y, "y")
    v = dominates(ctx.store, x, y)
    return {"x": ctx.vec(x), "y": ctx.vec(y), "holds": v.holds, "reason": v.reason}


def _dn_result(ctx, rep):
    if rep.recurrence_mismatches:
        ctx.note(f"{len(rep.recurrence_mismatches)} roots where the #D recurrence disagrees with the scan")
    return {
        "complete_up_to": rep.complete_up_to,
        "depth_scanned": rep.depth_scanned,
        "exhausted": rep.exhausted,
        "sizes": {str(n): len(s) for n, s in rep.sets.items()},
        "sets": {str(n): [ctx.root(i) for i in sorted(s)] for n, s in rep.sets.items()},
    }


def cmd_dn(ctx):
    n = 2 if ctx.args.n is None else ctx.args.n
    return _dn_result(ctx, enumerate_Dn(ctx.store, n))


def cmd_small_roots(ctx):
    rep = enumerate_Dn(ctx.store, 0)
    return {"count": len(rep.sets[0]), "depth_scanned": rep.depth_scanned,
            "elementary": [ctx.root(i) for i in sorted(rep.sets[0])]}


def _sub_record(ctx, sub):
    rec = {
        "canonical_pair": [ctx.vec(sub.alpha), ctx.vec(sub.beta)],
        "kind": sub.kind,
        "m": sub.m,
        "theta": round(sub.theta, 12) + 0.0,
        "certified": sub.certified,
        "window_depth": sub.window_depth,
    }
    if not sub.certified:
        ctx.note("dihedral subsystem not certified: " + "; ".join(sub.diagnostics))
    elif sub.diagnostics:
        ctx.note("dihedral certification window widened")
    return rec


def cmd_height(ctx):
    x = target_root(ctx)
    rep = infinity_height(ctx.store, x)
    root = ctx.store.roots[rep.reflection]
    if not rep.consistent:
        ctx.note("a plane's chain height disagrees with its share of the inversion set")
    return {
        "reflection": ctx.reflection(root.id),
        "standard": rep.standard,
        "infinity": rep.infinity,
        "infinity_via_decomposition": rep.via_decomposition,
        "methods_agree": rep.methods_agree,
        "window_depth": rep.window_depth,
        "per_subsystem": [dict(_sub_record(ctx, s), height=h) for s, h in rep.per_subsystem],
    }


def cmd_tn(ctx):
    n = 2 if ctx.args.n is None else ctx.args.n
    rep = enumerate_Tn(ctx.store, n)
    return {
        "complete_up_to": rep.dn.complete_up_to,
        "depth_scanned": rep.dn.depth_scanned,
        "sizes": {str(k): len(s) for k, s in rep.sets.items()},
        "sets": {str(k): [ctx.reflection(i) for i in sorted(s)] for k, s in rep.sets.items()},
    }


def cmd_decompose(ctx):
    x = target_root(ctx)
    dec = decompose_reflections(ctx.store, x, ctx.args.depth)
    ctx.window_caveat()
    planes = []
    for g in dec.planes:
        rec = {"roots": [ctx.vec(ctx.store.roots[i].coeffs) for i in g.roots], "height": g.height}
        if g.subsystem is not None:
            rec["subsystem"] = _sub_record(ctx, g.subsystem)
        planes.append(rec)
    if dec.window_depth < 2 * ctx.store.roots[dec.root].depth - 1:
        ctx.note(f"decomposition window depth {dec.window_depth} is below l(t); heights may fall short")
    return {
        "reflection": ctx.reflection(dec.root),
        "window_depth": dec.window_depth,
        "plane_count": len(planes),
        "height_sum": dec.height_sum(),
        "infinity_sum": dec.infinity_sum(),
        "planes": planes,
    }


def cmd_chains(ctx):
    x, y = ctx.parse_vec(ctx.args.x, "x"), ctx.parse_vec(ctx.args.y, "y")
    sub = maximal_dihedral(ctx.store, x, y)
    out = {"subsystem": _sub_record(ctx, sub),
           "heights": {"x": subsystem_height(sub, x), "y": subsystem_height(sub, y)}}
    if sub.infinite:
        k = ctx.args.n or 5
        c1, c2 = dominance_chains(sub, k, ctx.store)
        out["chains"] = [[ctx.vec(v) for v in c1], [ctx.vec(v) for v in c2]]
        out["alpha_side"] = [ctx.vec(chain_root(sub, "alpha", i)) for i in range(k)]
        out["beta_side"] = [ctx.vec(chain_root(sub, "beta", i)) for i in range(k)]
    return out


def cmd_cone(ctx):
    a = ctx.args
    if a.v is not None:
        v = ctx.parse_vec(a.v, "v")
        verdict = imaginary_cone_contains(ctx.store, v)
        out = {"mode": "general", "v": ctx.vec(v)}
    else:
        x, y = ctx.parse_vec(a.x, "x"), ctx.parse_vec(a.y, "y")
        verdict = imaginary_cone_contains(ctx.store, x=x, y=y)
        out = {"mode": "root-difference", "x": ctx.vec(x), "y": ctx.vec(y),
               "tits_dual": tits_dual_contains(ctx.store, x, y, check=False)}
    out.update({
        "status": verdict.status,
        "witness": verdict.witness.word_1based() if verdict.witness is not None else None,
        "certificate": verdict.certificate,
    })
    if verdict.status == INCONCLUSIVE:
        ctx.note("cone descent hit its iteration cap")
        ctx.inconclusive = True
    return out


def cmd_witness(ctx):
    x, y = ctx.parse_vec(ctx.args.x, "x"), ctx.parse_vec(ctx.args.y, "y")
    w = key_witness(ctx.store, x, y)
    v = act(w, tuple(a - b for a, b in zip(x, y)))
    cover = dominance_cover(ctx.store, x, y)
    return {
        "word": w.word_1based(),
        "wx": ctx.vec(act(w, x)),
        "wy": ctx.vec(act(w, y)),
        "w(x-y)": ctx.vec(v),
        "cover": cover.is_cover,
        "between": ctx.vec(cover.between) if cover.between is not None else None,
    }


def _verify(ctx, depth, n):
    heights = verify_height_identities(ctx.store, max_length=2 * depth - 1, n_max=n)
    cone = verify_cone_identities(ctx.store, max_depth=min(depth, 6))
    if not all(r["certified"] for r in heights["a"]):
        ctx.note("some dihedral subsystems were not certified")
    return {
        "heights": {
            "ok": heights["ok"],
            "reflections_checked": len(heights["a"]),
            "height_sum_failures": [r["root"] for r in heights["a"] if not r["ok"]],
            "tn_bound": heights["b"],
            "conjugation_checked": len(heights["c"]),
            "conjugation_failures": [r["root"] for r in heights["c"] if not r["ok"]],
            "finite_group": heights["finite_group"],
        },
        "cone": {
            "ok": cone["ok"],
            "dominated_pairs": cone["dominated_pairs"],
            "rejected_pairs": cone["rejected_pairs"],
            "samples": cone["samples"],
            "elements": cone["elements"],
            "failures": len(cone["failures"]),
        },
        "ok": heights["ok"] and cone["ok"],
    }


def cmd_verify(ctx):
    depth = ctx.args.depth or 6
    n = 2 if ctx.args.n is None else ctx.args.n
    out = _verify(ctx, depth, n)
    ctx.failed = not out["ok"]
    return out


def report_all(ctx, depth=8, n=3):
    """Roots, D_n, T_n and both identity sweeps in one dossier."""
    store = ctx.store
    store.ensure_depth(depth)
    roots = store.roots_up_to(depth)
    dn = enumerate_Dn(store, n)
    tn = enumerate_Tn(store, n)
    checks = _verify(ctx, depth, n)
    dominated_pairs = sum(len(dominated_set(store, r.coeffs)) for r in roots)
    if store.exhausted:
        ctx.note("root system exhausted: the group is finite")
    else:
        ctx.window_caveat()
    return {
        "finite_group": store.exhausted,
        "positive_roots": len(roots),
        "roots_per_depth": [len(store.level(k)) for k in range(1, min(depth, store.depth) + 1)],
        "dominated_pairs": dominated_pairs,
        "dn": _dn_result(ctx, dn),
        "tn_sizes": {str(k): len(s) for k, s in tn.sets.items()},
        "checks": checks,
        "ok": checks["ok"],
    }


def cmd_report(ctx):
    out = report_all(ctx, ctx.args.depth or 8, 3 if ctx.args.n is None else ctx.args.n)
    ctx.failed = not out["ok"]
    return out


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


# -- plumbing ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidArgument(message)


def build_parser():
    p = _Parser(prog="coxdom", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--datum", required=True, metavar="PATH")
    p.add_argument("--depth", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--x", metavar="COEFFS")
    p.add_argument("--y", metavar="COEFFS")
    p.add_argument("--v", metavar="COEFFS")
    p.add_argument("--word", metavar="W", help="dot-separated 1-based generators, e.g. 1.2.1")
    p.add_argument("--backend", choices=("float", "rational"), default="float")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    return p


def _echo(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED and v is not None}


def run(argv):
    """(exit code, report dict)."""
    try:
        args = build_parser().parse_args(argv)
    except InvalidArgument as exc:
        return 1, {"command": None, "status": "error", "error": exc.to_record()}
    report = {"command": args.command, "options": _echo(args)}
    start = time.perf_counter()
    code = 0
    try:
        if args.depth is not None and args.depth < 1:
            raise InvalidArgument("--depth must be >= 1")
        if args.n is not None and args.n < 0:
            raise InvalidArgument("--n must be >= 0")
        if args.threads < 1:
            raise InvalidArgument("--threads must be >= 1")
        ctx = Context(args)
        ctx.failed = ctx.inconclusive = False
        report["datum"] = {"fingerprint": ctx.datum.fingerprint(), "rank": ctx.datum.rank,
                           "backend": ctx.arith.name}
        report["results"] = HANDLERS[args.command](ctx)
        report["caveats"] = ctx.caveats
        if ctx.failed:
            report["status"], code = "failed", 2
        elif ctx.inconclusive:
            report["status"], code = "inconclusive", 2
        else:
            report["status"] = "ok"
    except CoxdomError as exc:
        report["status"] = "error"
        report["error"] = exc.to_record()
        code = exc.exit_code
    except OSError as exc:
        report["status"] = "error"
        report["error"] = {"type": "IOError", "message": str(exc)}
        code = 1
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3), "kernels": kernels.BACKEND}
    return code, report


def _pretty(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v)


def _scalar(v):
    if isinstance(v, list):
        return "(" + ", ".join(str(e) for e in v) + ")"
    if v is None:
        return "-"
    return str(v)


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    code, report = run(argv)
    if "--pretty" in argv:
        print("\n".join(_pretty(report)))
    else:
        print(json.dumps(report, indent=2))
    return code

