"""Compare the compiled and pure-Python simulation kernels.

Usage: python benchmarks/bench_kernels.py [--days N] [--repeat R]
"""

import argparse
import time

import numpy as np

from aimd_sampling import kernel
from aimd_sampling.controller import DEFAULT_PARAMS, ControllerState, FsmState, controller_step
from aimd_sampling.simulator import run_simulation
from aimd_sampling.traces import synth_trace
from aimd_sampling.tuner import GridSpec, grid_search


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--days", type=int, default=3650)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    trace = synth_trace(args.days, 0.02, 0.12, 172, 0.4, 1)
    traces = [synth_trace(365, 0.02, 0.12, 172, 0.4, s) for s in range(5)]
    grid = GridSpec(steps=(6, 6, 4))
    print(f"backends available: {', '.join(kernel.available_backends())}")
    print(f"{'backend':<10}{'simulate ns/day':>18}{'grid s':>10}")
    for name in kernel.available_backends():
        t_sim = best_of(lambda: run_simulation(trace, backend=name), args.repeat)
        t_grid = best_of(lambda: grid_search(grid, traces, backend=name), args.repeat)
        print(f"{name:<10}{t_sim / args.days * 1e9:>18.0f}{t_grid:>10.3f}")

    rng = np.random.default_rng(0)
    bs = rng.uniform(0.05, 1.0, 100_000).tolist()
    state = ControllerState(FsmState.HOLD, 24, 0.5)
    t0 = time.perf_counter()
    for b in bs:
        state = controller_step(state, b, DEFAULT_PARAMS)
    print(f"controller_step (Python API): {(time.perf_counter() - t0) / len(bs) * 1e6:.2f} us/call")


if __name__ == "__main__":
    main()
