"""Benchmark the compiled kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--quick]

Times the two hot paths on sizes representative of the simulation
scenarios: batched density queries and arc-minimum edge weights.
"""

import argparse
import time

import numpy as np

from dirclust._kernels import _pure

try:
    from dirclust._kernels import _speedups
except ImportError:
    _speedups = None


def unit_sample(rng, n, d):
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def timeit(fn, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_log_mean_exp(rng, sizes):
    print("\nlog_mean_exp_dots (m queries x n centers)")
    print(f"{'m':>8} {'n':>6} {'d':>3} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for m, n, d in sizes:
        q = unit_sample(rng, m, d)
        x = unit_sample(rng, n, d)
        t_pure = timeit(lambda: _pure.log_mean_exp_dots(q, x, 50.0))
        if _speedups is None:
            print(f"{m:>8} {n:>6} {d:>3} {t_pure:>9.3f}s {'-':>10} {'-':>8}")
            continue
        t_fast = timeit(lambda: _speedups.log_mean_exp_dots(q, x, 50.0))
        print(f"{m:>8} {n:>6} {d:>3} {t_pure:>9.3f}s {t_fast:>9.3f}s {t_pure / t_fast:>7.1f}x")


def bench_arc_min(rng, sizes):
    print("\narc_min_log_mean_exp (E edges, n vertices = kernel centers)")
    print(f"{'E':>8} {'n':>6} {'d':>3} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for n, knn, d in sizes:
        x = unit_sample(rng, n, d)
        ei = np.repeat(np.arange(n), knn)
        ej = (ei + rng.integers(1, n // 2, size=len(ei))) % n
        keep = ei < ej
        ei, ej = ei[keep], ej[keep]
        t_pure = timeit(lambda: _pure.arc_min_log_mean_exp(x, x, ei, ej, 50.0, 0.02, 5),
                        repeats=2)
        if _speedups is None:
            print(f"{len(ei):>8} {n:>6} {d:>3} {t_pure:>9.3f}s {'-':>10} {'-':>8}")
            continue
        t_fast = timeit(lambda: _speedups.arc_min_log_mean_exp(x, x, ei, ej, 50.0, 0.02, 5),
                        repeats=2)
        print(f"{len(ei):>8} {n:>6} {d:>3} {t_pure:>9.3f}s {t_fast:>9.3f}s "
              f"{t_pure / t_fast:>7.1f}x")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="small sizes only")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    if _speedups is None:
        print("compiled extension not available; timing the numpy fallback only")

    if args.quick:
        lme_sizes = [(20_000, 500, 2), (20_000, 500, 3)]
        arc_sizes = [(500, 10, 2), (500, 10, 3)]
    else:
        # edges here are random pairs, i.e. worst-case long arcs; the mutual
        # kNN graphs used in anger have much shorter ones
        lme_sizes = [(20_000, 500, 2), (150_000, 1500, 2), (150_000, 2000, 3)]
        arc_sizes = [(500, 10, 3), (1000, 10, 2), (1000, 10, 3)]

    bench_log_mean_exp(rng, lme_sizes)
    bench_arc_min(rng, arc_sizes)


if __name__ == "__main__":
    main()
