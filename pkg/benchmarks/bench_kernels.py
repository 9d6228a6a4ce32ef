"""Compare the numba and numpy backends of the split-matrix kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time
from math import comb

import numpy as np

from fermicon import _kernels
from fermicon.backend import numba_available
from fermicon.fock import SystemShape, random_state

SHAPES = [(6, 3), (8, 4), (10, 5), (12, 6), (14, 7)]


def time_call(fn, *args, repeats):
    fn(*args)  # warm-up (and numba compilation)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not numba_available():
        print("numba is not importable; nothing to compare")
        return

    print(f"{'shape':>8} {'m':>3} {'dim':>6} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}")
    for d, n in SHAPES:
        amps = random_state(SystemShape(d, n), seed=0).amplitudes
        m = n // 2
        t_np = time_call(_kernels.split_purity, amps, d, n, m, "numpy", repeats=args.repeats)
        t_nb = time_call(_kernels.split_purity, amps, d, n, m, "numba", repeats=args.repeats)
        a = _kernels.split_purity(amps, d, n, m, "numpy")
        b = _kernels.split_purity(amps, d, n, m, "numba")
        assert abs(a - b) < 1e-12, (d, n, m, a, b)
        print(
            f"({d:>2},{n:>2}) {m:>3} {comb(d, n):>6}"
            f" {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} {t_np / t_nb:>7.2f}x"
        )


if __name__ == "__main__":
    main()
