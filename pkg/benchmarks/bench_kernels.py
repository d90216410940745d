"""Benchmark the hot kernels: numba JIT vs pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py
"""

import math
import time

import numpy as np

from wirescat import kernels


def timeit(fn, *args, repeat=5):
    fn(*args)  # warm-up (and JIT compile for the numba path)
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    print(f"active backend: {kernels.backend()}")
    rows = []

    # evanescent-mode Gaussian-damped sum, the regularized-scale workhorse
    args = (0.3, (2 * math.pi) ** 2 * 1.05, 2, 2e-5, 300_000)
    rows.append(("cut_sum (3e5 terms)", timeit(kernels.cut_sum_numpy, *args),
                 timeit(kernels.cut_sum, *args) if kernels.backend() == "numba" else None))

    # tail sum used by the analytic cross-check route
    args = (0.3, (2 * math.pi) ** 2 * 1.05, 2, 250_000)
    rows.append(("tail_sum (2.5e5 terms)", timeit(kernels.tail_sum_numpy, *args),
                 timeit(kernels.tail_sum, *args) if kernels.backend() == "numba" else None))

    # field synthesis on a plotting grid
    xs = np.linspace(0.0, 2.0, 400)
    ys = np.linspace(0.002, 0.998, 300)
    nl = 120
    rng = np.random.default_rng(0)
    coefs = (rng.normal(size=nl) + 1j * rng.normal(size=nl)) / np.arange(1, nl + 1)
    kxs = np.where(np.arange(1, nl + 1) <= 2,
                   np.arange(1, nl + 1) * (1.0 + 0j),
                   1j * np.arange(1, nl + 1) * np.pi)
    rows.append(("field_grid (300x400, 120 modes)",
                 timeit(kernels.field_grid_numpy, xs, ys, coefs, kxs),
                 timeit(kernels.field_grid, xs, ys, coefs, kxs)
                 if kernels.backend() == "numba" else None))

    print(f"{'kernel':36s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}")
    for name, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{name:36s} {t_np * 1e3:10.2f}ms {'-':>12s} {'-':>9s}")
        else:
            print(f"{name:36s} {t_np * 1e3:10.2f}ms {t_nb * 1e3:10.2f}ms "
                  f"{t_np / t_nb:8.1f}x")
    if kernels.backend() == "numpy":
        print("numba unavailable or disabled (WIRESCAT_NO_NUMBA=1): no JIT column")


if __name__ == "__main__":
    main()
