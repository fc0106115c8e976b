#!/usr/bin/env python3
"""Benchmark the compiled orbit kernel against the pure-Python fallback.

Runs exact period searches of increasing length plus a fixed-budget walk of
the on-line orbit, on both kernels, and prints steps/second.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import statistics
import time

from pwrot import stepper
from pwrot.casestudy import golden_context, golden_rescale
from pwrot.stepper import decompose


def timed_search(kernel, v, budget, repeat):
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = kernel.period_search(list(v), list(v), budget)
        times.append(time.perf_counter() - t0)
    status, steps, _, _ = result
    return steps, statistics.median(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    gc = golden_context()
    plan = stepper._plan(gc.ctx)

    cases = []
    p = gc.P0
    for n in range(7):
        if n in (4, 5, 6):
            cases.append((f"period search P{n}", p, 200000))
        p = golden_rescale(gc, p)
    cases.append(("budget walk of Q (1e5 steps)", gc.Q, 100000))

    kernels = [("pure", plan.pure_kernel)]
    if stepper.HAVE_COMPILED:
        kernels.append(("compiled", plan.compiled_kernel))
    else:
        print("note: compiled kernel not built; showing pure only")

    print(f"{'case':34} {'kernel':9} {'steps':>9} {'time':>9} {'steps/s':>12}")
    for label, z, budget in cases:
        v, denom = decompose(z)
        rates = {}
        for kname, factory in kernels:
            kernel = factory(denom)
            steps, t = timed_search(kernel, v, budget, args.repeat)
            rates[kname] = steps / t if t else float("inf")
            print(f"{label:34} {kname:9} {steps:9d} {t:8.3f}s {rates[kname]:12.0f}")
        if len(rates) == 2:
            print(f"{'':34} speedup x{rates['compiled'] / rates['pure']:.1f}")


if __name__ == "__main__":
    main()
