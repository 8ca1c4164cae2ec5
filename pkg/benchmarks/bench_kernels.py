"""Time the numba kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py --size 1000000 --repeat 3

The first numba call per kernel is a warm-up (JIT or cache load) and is not
timed.  Outputs are compared before timing so a speedup never hides a
mismatch.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from selberg_e2.arith import primes_up_to
from selberg_e2.kernels import IMPLEMENTATIONS


def _cases(size: int):
    primes = primes_up_to(int((2 * size) ** 0.5) + 1)
    rng = np.random.default_rng(0)
    moduli = rng.integers(1, 200, size=2000)
    residues = rng.integers(0, 10**6, size=2000) % moduli
    weights = rng.standard_normal(2000)
    w = rng.standard_normal(min(size, 200_000))
    ps_small = primes_up_to(min(size, 200_000))
    gp = 1.0 / ps_small
    values = primes_up_to(2 * size).astype(np.int64)
    thresholds = np.linspace(1, 2 * size, 64).astype(np.int64)
    return {
        "factor_progression": lambda f: f(1, 0, size, size, primes),
        "accumulate": lambda f: _acc(f, size, residues, moduli, weights),
        "multiple_sums": lambda f: f(w),
        "multiplicative": lambda f: f(min(size, 200_000), ps_small, gp),
        "class_counts": lambda f: f(values, 30, thresholds),
    }


def _acc(f, size, residues, moduli, weights):
    acc = np.zeros(size)
    f(acc, size, residues, moduli, weights)
    return acc


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-9, atol=1e-9)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=10**6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"{'kernel':<20}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, run in _cases(args.size).items():
        fast, slow = IMPLEMENTATIONS["numba"][name], IMPLEMENTATIONS["numpy"][name]
        if not _same(run(fast), run(slow)):
            raise SystemExit(f"{name}: numba and numpy outputs differ")
        timings = []
        for f in (fast, slow):
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                run(f)
                best = min(best, time.perf_counter() - t0)
            timings.append(best)
        print(f"{name:<20}{timings[0]:>12.4f}{timings[1]:>12.4f}{timings[1] / timings[0]:>10.1f}")


if __name__ == "__main__":
    main()
