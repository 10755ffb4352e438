"""Throughput comparison of the sieve kernels: compiled extension vs pure
Python.

Micro-benchmarks call the two backend modules directly; the end-to-end row
swaps the dispatcher's backend so the whole segmented census runs on each.

Usage:
    python3 benchmarks/bench_kernels.py [--limit N] [--base B] [--repeat R]
"""

from __future__ import annotations

import argparse
import time
from math import isqrt

from deadend import _kernels_py, census, kernels
from deadend.arith import primes_up_to

try:
    from deadend import _kernels
except ImportError:
    _kernels = None


def best_of(repeat: int, fn, *args):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def fmt_rate(n: int, seconds: float) -> str:
    return f"{n / seconds / 1e6:8.1f} M/s"


def run(limit: int, base: int, repeat: int) -> None:
    backends = [("pure", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))
    else:
        print("note: compiled extension not importable; benchmarking pure only")

    primes = primes_up_to(isqrt(limit)).primes
    print(f"square-free flags over [1, {limit})")
    times = {}
    flags = {}
    for name, impl in backends:
        t, f = best_of(repeat, impl.squarefree_flags, 1, limit, primes)
        times[name] = t
        flags[name] = f
        print(f"  {name:7s} {t * 1e3:9.2f} ms   {fmt_rate(limit, t)}")
    if len(flags) == 2:
        assert flags["pure"] == flags["cython"], "backend outputs differ!"
        print(f"  speedup {times['pure'] / times['cython']:9.1f}x  (outputs identical)")

    n = limit // (base + 1)
    parent = kernels.squarefree_flags(1, 1 + n)
    child = kernels.squarefree_flags(base, base * (1 + n))
    print(f"\ndead-end mask, base {base}, {n} parents")
    times = {}
    masks = {}
    for name, impl in backends:
        t, m = best_of(repeat, impl.dead_end_mask, parent, child, base)
        times[name] = t
        masks[name] = m
        print(f"  {name:7s} {t * 1e3:9.2f} ms   {fmt_rate(n, t)}")
    if len(masks) == 2:
        assert masks["pure"] == masks["cython"], "backend outputs differ!"
        print(f"  speedup {times['pure'] / times['cython']:9.1f}x  (outputs identical)")

    print(f"\nend-to-end enumeration, base {base}, limit {limit}")
    times = {}
    counts = {}
    original = kernels._impl
    try:
        for name, impl in backends:
            kernels._impl = impl
            t, c = best_of(repeat, census.enumerate_dead_ends, base, limit)
            times[name] = t
            counts[name] = c
            print(f"  {name:7s} {t * 1e3:9.2f} ms   {c} dead ends")
    finally:
        kernels._impl = original
    if len(counts) == 2:
        assert counts["pure"] == counts["cython"], "backend counts differ!"
        print(f"  speedup {times['pure'] / times['cython']:9.1f}x  (counts identical)")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--limit", type=int, default=10**7)
    parser.add_argument("--base", type=int, default=2)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"active dispatcher backend: {kernels.BACKEND}\n")
    run(args.limit, args.base, args.repeat)


if __name__ == "__main__":
    main()
