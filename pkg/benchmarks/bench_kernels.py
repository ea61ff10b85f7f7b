"""Benchmark the compiled kernels against the numpy fallback.

Times the raw fused step kernel and a full recorded evolution under both
backends and prints a small table with speedups.

Usage:
    python benchmarks/bench_kernels.py [--tmax 4000] [--repeats 3]
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from corrwalk import backend
from corrwalk.ensemble import EnsembleConfig, run_single
from corrwalk.disorder import DisorderParams


def best_of(repeats: int, fn) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_raw_step(name: str, repeats: int, sites: int = 200_001,
                   sweeps: int = 50) -> float:
    rng = np.random.default_rng(0)
    up = (rng.normal(size=sites) + 1j * rng.normal(size=sites)).astype(np.complex128)
    down = (rng.normal(size=sites) + 1j * rng.normal(size=sites)).astype(np.complex128)
    up[0] = up[-1] = down[0] = down[-1] = 0.0
    c, s = math.cos(0.7), math.sin(0.7)

    def work():
        with backend.use(name) as kernels:
            for _ in range(sweeps):
                kernels.step_kernel(up, down, c, s, 1, sites - 2)

    elapsed = best_of(repeats, work)
    rate = sweeps * (sites - 2) / elapsed / 1e6
    print(f"  {name:>8}: {elapsed:.3f} s  ({rate:,.0f} Msites/s)")
    return elapsed


def bench_recorded_walk(name: str, repeats: int, t_max: int) -> float:
    config = EnsembleConfig(
        t_max=t_max,
        samples=1,
        master_seed=1,
        disorder=DisorderParams(theta0=math.pi / 4, r=0.3, correlation=-0.4,
                                length=t_max + 1),
        record=("m2", "s_e"),
    )

    def work():
        with backend.use(name):
            run_single(config, 0)

    elapsed = best_of(repeats, work)
    print(f"  {name:>8}: {elapsed:.3f} s  ({t_max / elapsed:,.0f} steps/s)")
    return elapsed


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tmax", type=int, default=4000,
                        help="steps for the recorded-walk benchmark")
    parser.add_argument("--repeats", type=int, default=3, help="best-of repeats")
    args = parser.parse_args()

    names = backend.available_backends()
    if "compiled" not in names:
        print("compiled backend not built; benchmarking the fallback only")

    print(f"raw fused step kernel (200001 sites x 50 sweeps, best of {args.repeats}):")
    raw = {name: bench_raw_step(name, args.repeats) for name in names}

    print(f"full walk with m2 + entropy recording (t_max={args.tmax}, "
          f"best of {args.repeats}):")
    walk = {name: bench_recorded_walk(name, args.repeats, args.tmax) for name in names}

    if "compiled" in names and "python" in names:
        print("speedup compiled vs python:")
        print(f"  raw step kernel : {raw['python'] / raw['compiled']:.2f}x")
        print(f"  recorded walk   : {walk['python'] / walk['compiled']:.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
