"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--max-len 8] [--points 1000000]

Prints one line per kernel with both timings and the speedup, after checking
that the two backends return identical results.
"""

import argparse
import time

import numpy as np

from bridgeman import kernels
from bridgeman.orthospec import build_pants


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-len", type=int, default=8)
    ap.add_argument("--points", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    gens, bwords, axes, norms = build_pants(2.0, 2.0, 2.0).kernel_data()
    enum = {}
    for name, mod in (("compiled", kernels.compiled), ("python", kernels.fallback)):
        enum[name] = best_of(lambda m=mod: m.enumerate_classes(gens, bwords, axes, norms, args.max_len), args.repeat)
    same = all(np.array_equal(a, b) for a, b in zip(enum["compiled"][1], enum["python"][1]))
    tc, tp = enum["compiled"][0], enum["python"][0]
    print(f"enumerate_classes max_len={args.max_len} classes={len(enum['python'][1][0])}: "
          f"compiled {tc:.4f}s  python {tp:.4f}s  speedup {tp / tc:.1f}x  identical={same}")

    rng = np.random.default_rng(0)
    u = rng.uniform(-1.0, 2.0, args.points)
    v = rng.uniform(1e-3, 2.0, args.points)
    meas = {}
    for name, mod in (("compiled", kernels.compiled), ("python", kernels.fallback)):
        meas[name] = best_of(lambda m=mod: m.crossing_measure(u, v, 0.3), args.repeat)
    diff = float(np.max(np.abs(meas["compiled"][1] - meas["python"][1])))
    tc, tp = meas["compiled"][0], meas["python"][0]
    print(f"crossing_measure points={args.points}: compiled {tc:.4f}s  python {tp:.4f}s  "
          f"speedup {tp / tc:.1f}x  max_abs_diff={diff:.1e}")


if __name__ == "__main__":
    main()
