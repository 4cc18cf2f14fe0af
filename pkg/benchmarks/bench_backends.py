"""Benchmark the compiled stepping kernel against the pure-Python one.

Runs identical seeded simulations on every available backend, reports
steps/second and the speedup, and verifies the trajectories are
bit-identical.

    python3 benchmarks/bench_backends.py [--years N] [--seed S]
"""

import argparse
import time

import numpy as np

import hogcycle as hc


def bench(backend: str, years: int, seed: int):
    record = hc.RecordSpec(grid_stride=0, yearly=True)
    start = time.perf_counter()
    traj = hc.simulate(hc.SP, seed=seed, years=years, record=record, backend=backend)
    elapsed = time.perf_counter() - start
    return elapsed, traj


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--years", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    nsteps = args.years * hc.SP.q
    backends = hc.available_backends()
    print(f"SP, {args.years} years = {nsteps:.2e} steps, seed {args.seed}")
    print(f"available backends: {', '.join(backends)}\n")

    results = {}
    for backend in backends:
        elapsed, traj = bench(backend, args.years, args.seed)
        results[backend] = (elapsed, traj)
        print(
            f"  {backend:>7}: {elapsed:8.3f} s   "
            f"{nsteps / elapsed / 1e6:8.2f} M steps/s"
        )

    if len(results) == 2:
        speedup = results["python"][0] / results["c"][0]
        print(f"\nspeedup (c vs python): {speedup:.1f}x")
        a, b = results["c"][1], results["python"][1]
        identical = all(
            np.array_equal(a.yearly[key], b.yearly[key]) for key in a.yearly
        )
        print(f"trajectories bit-identical: {identical}")
        if not identical:
            raise SystemExit("backend mismatch!")


if __name__ == "__main__":
    main()
