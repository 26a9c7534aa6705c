"""Compare the numba and pure-numpy subset-transform kernels.

Run directly: python benchmarks/bench_transforms.py [max_n]

The numpy fallback is what you get with ANDOR_NO_NUMBA=1; here both
implementations are imported explicitly so one process can time them
side by side.
"""

import sys
import time

import numpy as np

from andor._kernels import (USE_NUMBA, _diff_transform_nb, _sum_transform_nb,
                            diff_transform_np, sum_transform_np)


def bench(fn, a, repeats):
    best = float("inf")
    for _ in range(repeats):
        buf = a.copy()
        t0 = time.perf_counter()
        fn(buf)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    rng = np.random.default_rng(0)
    kernels = [("diff/numpy", diff_transform_np), ("sum/numpy", sum_transform_np)]
    if USE_NUMBA:
        # trigger compilation outside the timed region
        _diff_transform_nb(np.zeros(8))
        _sum_transform_nb(np.zeros(8))
        kernels += [("diff/numba", _diff_transform_nb),
                    ("sum/numba", _sum_transform_nb)]
    else:
        print("numba unavailable or disabled; timing numpy only")

    print(f"{'n':>4} " + " ".join(f"{name:>12}" for name, _ in kernels))
    for n in range(10, max_n + 1, 2):
        a = rng.normal(size=1 << n)
        repeats = max(3, 1 << max(0, 18 - n))
        times = [bench(fn, a, repeats) for _, fn in kernels]
        print(f"{n:>4} " + " ".join(f"{t * 1e3:>10.3f}ms" for t in times))


if __name__ == "__main__":
    main()
