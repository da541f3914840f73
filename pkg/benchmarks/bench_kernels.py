"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--depth 14] [--repeat 5]

Each kernel runs on the same inputs under both implementations; outputs
are compared before anything is timed.
"""

import argparse
import pathlib
import timeit

import numpy as np

from coxdom import kernels
from coxdom.core import load_datum_file
from coxdom.roots import RootStore

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def workloads(datum_name, depth):
    store = RootStore(load_datum_file(DATA / f"{datum_name}.cox"))
    store.ensure_depth(depth)
    X, D = store.arrays()
    G = store.gram_array()
    ids = np.arange(len(X), dtype=np.intp)
    top = X[D == D.max()]
    rng = np.random.default_rng(0)
    vs = rng.integers(0, 8, size=(200, len(G))).astype(float)
    return {
        "expand_level": lambda: kernels.expand_level(top, G, 1e-9),
        "dominated_counts": lambda: kernels.dominated_counts(X, D, ids, X, D, G, 1e-9),
        "cone_descent": lambda: [kernels.cone_descent(v, G, 10_000, 1e-9)[0] for v in vs],
    }, len(X)


def _same(a, b):
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(_same(u, v) for u, v in zip(a, b))
    return np.allclose(a, b)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--datum", default="triangle_337")
    p.add_argument("--depth", type=int, default=14)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()

    backends = kernels.available()
    if "cython" not in backends:
        print("compiled kernels not built; only the numpy fallback is available")
    jobs, n = workloads(args.datum, args.depth)
    print(f"{args.datum}, depth <= {args.depth}: {n} positive roots")
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in jobs.items():
        outs, times = {}, {}
        for b in backends:
            kernels.use(b)
            outs[b] = fn()
            times[b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        if len(backends) > 1 and not _same(outs["cython"], outs["python"]):
            raise SystemExit(f"{name}: implementations disagree")
        row = f"{name:<18}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
