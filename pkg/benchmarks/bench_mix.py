"""Benchmark the second-moment mixing kernel: numba loops vs numpy einsum.

Run:  python3 benchmarks/bench_mix.py
"""

import time

import numpy as np

from varprop.kernels import active_backend, mix_second_moments, set_backend
from varprop.moments import dirichlet_moments


def make_case(t, n_parents, k=1, rng=None):
    rng = rng or np.random.default_rng(0)
    c = t**n_parents
    mt = dirichlet_moments([0] * t)
    n_rows = c
    row_ids = rng.integers(0, n_rows, size=(k, c))
    row_mean = np.tile(mt.mean, (n_rows, 1))
    row_second = np.tile(mt.second, (n_rows, 1, 1))
    mean_factor = rng.random((k, c))
    mean_factor /= mean_factor.sum(axis=1, keepdims=True)
    pair_factor = np.einsum("mc,nd->mncd", mean_factor, mean_factor)
    return row_ids, row_mean, row_second, mean_factor, pair_factor


def time_backend(backend, args, reps):
    set_backend(backend)
    mix_second_moments(*args)  # warm up (jit compile on first numba call)
    t0 = time.perf_counter()
    for _ in range(reps):
        mix_second_moments(*args)
    return (time.perf_counter() - t0) / reps


def main():
    default = active_backend()
    print(f"{'t':>3} {'parents':>7} {'terms':>12} {'numpy (ms)':>11} "
          f"{'numba (ms)':>11} {'speedup':>8}")
    for n_parents in (1, 2, 3):
        for t in (2, 3, 4, 5):
            args = make_case(t, n_parents)
            reps = max(3, int(2e6 / (t ** (2 * n_parents + 2))))
            t_np = time_backend("numpy", args, reps)
            t_nb = time_backend("numba", args, reps)
            _, _, terms = mix_second_moments(*args)
            print(f"{t:>3} {n_parents:>7} {terms:>12} {t_np * 1e3:>11.4f} "
                  f"{t_nb * 1e3:>11.4f} {t_np / t_nb:>8.2f}")
    set_backend(default)


if __name__ == "__main__":
    main()
