#!/usr/bin/env python3
"""Time the compiled kernels against the pure-numpy twins.

Runs both backends in one process (bypassing the import-time selection
in npswatch.heavytail.kernels), checks they agree, then reports
best-of-N wall times for the three hot entry points on a realistic
workload: a 50k-sample discrete power law, unique-value tails as seen
by the candidate-xmin scan.

Usage: python benchmarks/bench_kernels.py [--n 50000] [--repeat 7]
"""

import argparse
import time

import numpy as np

from npswatch.heavytail import _pure

try:
    from npswatch.heavytail import _core
except ImportError:
    _core = None


def sample(alpha, n, rng, cap=10**6):
    xs = np.arange(1, cap + 1, dtype=float)
    p = xs**-alpha
    cdf = np.cumsum(p / p.sum())
    return (np.searchsorted(cdf, rng.random(n)) + 1).astype(np.int64)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=50_000)
    ap.add_argument("--alpha", type=float, default=2.5)
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--seed", type=int, default=1000)
    args = ap.parse_args()

    if _core is None:
        raise SystemExit("compiled backend not built; run pip install -e . first")

    data = np.sort(sample(args.alpha, args.n, np.random.default_rng(args.seed)))
    uniq, counts = np.unique(data, return_counts=True)
    uniq, counts = uniq.astype(np.float64), counts.astype(np.float64)
    logmean = float(np.sum(counts * np.log(uniq)) / counts.sum())
    guess = 1.0 + 1.0 / (logmean - np.log(0.5))

    # agreement first, timing is meaningless if the answers differ
    a_core = _core.mle_alpha(logmean, 1.0, guess)
    a_pure = _pure.mle_alpha(logmean, 1.0, guess)
    assert abs(a_core - a_pure) < 1e-10, (a_core, a_pure)
    for c, p in zip(_core.xmin_scan(uniq, counts, 10), _pure.xmin_scan(uniq, counts, 10)):
        assert np.allclose(c, p, rtol=1e-9)

    cases = [
        ("zeta(2.5, 1)", lambda b: b.zeta(2.5, 1.0)),
        ("zeta_logmoment(2.5, 1)", lambda b: b.zeta_logmoment(2.5, 1.0)),
        ("mle_alpha(xmin=1)", lambda b: b.mle_alpha(logmean, 1.0, guess)),
        (f"xmin_scan(n={args.n})", lambda b: b.xmin_scan(uniq, counts, 10)),
    ]

    print(f"n={args.n} alpha={args.alpha} seed={args.seed} best of {args.repeat}")
    print(f"{'kernel':<26} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for label, call in cases:
        t_pure = best_of(lambda: call(_pure), args.repeat)
        t_core = best_of(lambda: call(_core), args.repeat)
        print(f"{label:<26} {t_pure * 1e3:>9.2f}ms {t_core * 1e3:>9.2f}ms {t_pure / t_core:>7.2f}x")


if __name__ == "__main__":
    main()
