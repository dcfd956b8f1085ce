#!/usr/bin/env python3
"""Time the jitted kernels against their pure-numpy fallbacks.

Run directly:  python benchmarks/bench_kernels.py [--repeat 5]
The numpy path is what METROSCOPE_PURE_NUMPY=1 selects at import time; here
both variants are imported explicitly so one process can time the pair.
"""

import argparse
import time

import numpy as np

from metroscope import _kernels as K
from metroscope.dicke import log_binom_row


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not K._HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    from numba import njit

    jit_qfi = njit(cache=True)(K._qfi_pair_sum_loop)
    jit_spec = njit(cache=True)(K._spectrum_pair_sum_loop)
    jit_pt = njit(cache=True)(K._partial_trace_pair_loop)
    jit_sym = njit(cache=True)(K._sym_power_loop)

    rng = np.random.default_rng(0)
    rows = []

    D = 400
    p = np.sort(rng.dirichlet(np.ones(D)))[::-1]
    w = rng.random((D, D))
    w = w + w.T
    jit_qfi(p, w)  # compile
    rows.append(("qfi_pair_sum (D=400)",
                 timeit(K._qfi_pair_sum_np, p, w, repeat=args.repeat),
                 timeit(jit_qfi, p, w, repeat=args.repeat)))

    jit_spec(p)
    rows.append(("spectrum_pair_sum (D=400)",
                 timeit(K._spectrum_pair_sum_np, p, repeat=args.repeat),
                 timeit(jit_spec, p, repeat=args.repeat)))

    N, k = 300, 30
    a = rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)
    pt_args = (a, a, k, log_binom_row(k), log_binom_row(N - k), log_binom_row(N))
    jit_pt(*pt_args)
    rows.append((f"partial_trace_pair (N={N}, k={k})",
                 timeit(K._partial_trace_pair_np, *pt_args, repeat=args.repeat),
                 timeit(jit_pt, *pt_args, repeat=args.repeat)))

    V = np.array([[1.0, 2.0j], [2.0j, 1.0]]) / np.sqrt(5.0)
    sym_args = (V[0, 0], V[0, 1], V[1, 0], V[1, 1], 600)
    jit_sym(*sym_args)
    rows.append(("sym_power (N=600)",
                 timeit(K._sym_power_np, *sym_args, repeat=max(1, args.repeat // 2)),
                 timeit(jit_sym, *sym_args, repeat=max(1, args.repeat // 2))))

    print(f"{'kernel':<34} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9}")
    for name, t_np, t_nb in rows:
        print(f"{name:<34} {1e3 * t_np:>12.2f} {1e3 * t_nb:>12.2f} "
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
