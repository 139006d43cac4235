"""Benchmark the jitted kernels against their pure-numpy references.

Usage:
    python benchmarks/bench_kernels.py [--size 1000000] [--repeat 7]

The same kernels back every margin check, so the end-to-end section times a
full strip margin suite under the active backend.  Force the numpy path for a
whole process with SEMICONVEXITY_PURE_NUMPY=1.
"""

import argparse
import time

import numpy as np

from semiconvexity import kernels


def _best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(size, repeat):
    rng = np.random.default_rng(0)
    m = size
    fx, fy, fm = rng.standard_normal((3, m))
    dist = np.abs(rng.standard_normal(m)) + 1e-3
    lam = rng.uniform(0, 1, m)
    om = np.sqrt(dist)
    gdot = rng.standard_normal(m)
    A = rng.standard_normal((12, 3))
    b = rng.standard_normal(12)
    X = rng.standard_normal((m, 3))
    cases = {
        "semiconvex_margins": (fx, fy, fm, dist, lam, om),
        "envelope_margins": (fy, fx, gdot, dist, om),
        "gap_margins": (gdot, dist, om),
        "hrep_margins": (A, b, X),
        "row_norms": (X, 2),
        "first_violation": (np.abs(gdot), dist * om + 1e6),  # no violation: full scan
    }
    numpy_impls = kernels._NUMPY_IMPLS
    numba_impls = kernels._NUMBA_IMPLS
    print(f"array size {m:,}; best of {repeat} runs; active backend: {kernels.BACKEND}")
    header = f"{'kernel':<22}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, args in cases.items():
        t_np = _best_of(numpy_impls[name], args, repeat)
        if numba_impls is None:
            print(f"{name:<22}{1e3 * t_np:>12.3f}{'n/a':>12}{'n/a':>9}")
            continue
        numba_impls[name](*args)  # compile outside the timed region
        t_nb = _best_of(numba_impls[name], args, repeat)
        print(f"{name:<22}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>8.1f}x")


def bench_end_to_end(repeat):
    from semiconvexity import PowerModulus, SamplerSpec, StripBody, catalog_field, check_semiconvex

    body = StripBody()
    field = catalog_field("product", scale=0.5, domain=body)
    spec = SamplerSpec(seed=42, count=100000)

    def run():
        check_semiconvex(field, body, PowerModulus(0.5), spec)

    run()  # warm caches
    best = _best_of(lambda: run(), (), repeat)
    print(f"\nstrip margin suite, 100k triples, backend={kernels.BACKEND}: {1e3 * best:.1f} ms")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()
    bench_kernels(args.size, args.repeat)
    bench_end_to_end(max(3, args.repeat // 2))


if __name__ == "__main__":
    main()
