"""Compiled vs pure-Python kernels, and the full solver on each backend.

    python benchmarks/bench_kernels.py [--sizes 10000 100000 1000000] [--seed 0]
"""

import argparse
import time

from balpack import kernels, lower_bound_bins, solve_bmbp
from balpack.bench import random_instance


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is timed")
    print(f"{'n':>9} {'stage':<10}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for n in args.sizes:
        inst = random_instance(n, args.seed)
        m = lower_bound_bins(inst)
        sizes = list(inst.sizes)
        _, loads = kernels.pack_boxes(sizes, m)
        rows = {
            "pack": lambda b: kernels.pack_boxes(sizes, m, backend=b),
            "distribute": lambda b: kernels.distribute(loads, backend=b),
            "solve": lambda b: solve_bmbp(inst, backend=b),
        }
        for stage, fn in rows.items():
            times = [best_of(lambda: fn(b), args.repeat) for b in backends]
            line = f"{n:>9} {stage:<10}" + "".join(f"{t:>11.4f}s" for t in times)
            if len(times) > 1:
                line += f"{times[1] / times[0]:>11.1f}x"
            print(line)


if __name__ == "__main__":
    main()
