#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy/pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times the three hot kernels plus one end-to-end probability evaluation on
both backends and prints the speedups. The end-to-end case exercises the
paths the figure sweeps spend their time in.
"""

import argparse
import math
import time

import numpy as np

from sqcomp import _kernels_py

try:
    from sqcomp import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


CASES = [
    ("squeeze matrix 128x128 (r=0.8)",
     lambda k: k.squeeze_matrix_real(0.8, 128, 128)),
    ("pair-state grid 600 (r=1.5, s=0.5)",
     lambda k: k.pair_state_real(math.tanh(1.5), math.tanh(0.5), 600)),
    ("pair-state grid 2700 (r=3, s=0)",
     lambda k: k.pair_state_real(math.tanh(3.0), 0.0, 2700)),
    ("loss matrix 400 (eta=0.9)",
     lambda k: k.binomial_loss(0.9, 400)),
    ("detection series (r=3, eta=0.5)",
     lambda k: k.same_state_zero_prob_series(math.tanh(3.0) ** 2, 0.5, 20000, 1e-14)),
    ("detection series (r=3, eta=0.99)",
     lambda k: k.same_state_zero_prob_series(math.tanh(3.0) ** 2, 0.99, 20000, 1e-14)),
]


def end_to_end(kern):
    # lossy zero-difference probability at (r, s) = (0.9, 0.5), eta = 0.9
    dim = 160
    grid = kern.pair_state_real(math.tanh(0.9), math.tanh(0.5), dim)
    b = kern.binomial_loss(0.9, dim)
    w0 = b @ b.T
    return float(np.einsum("hk,hk->", w0, grid * grid))


def run(repeats):
    if _kernels is None:
        print("compiled kernels not built; showing the python backend alone")
    rows = []
    for name, fn in CASES + [("end-to-end lossy probability (dim 160)", end_to_end)]:
        t_py = best_of(lambda: fn(_kernels_py), repeats)
        if _kernels is not None:
            t_c = best_of(lambda: fn(_kernels), repeats)
            rows.append((name, t_py, t_c, t_py / t_c))
        else:
            rows.append((name, t_py, None, None))

    width = max(len(r[0]) for r in rows)
    header = f"{'case':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, t_py, t_c, speedup in rows:
        if t_c is None:
            print(f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
        else:
            print(f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {t_c * 1e3:>8.2f}ms  "
                  f"{speedup:>7.1f}x")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    run(parser.parse_args().repeats)
