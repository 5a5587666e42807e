"""Compare the numba kernels with the numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--skip-end-to-end]

Kernel timings call both paths in one process (``accel=True/False``) and
check that the outputs are identical. The end-to-end timing builds E(3, Z/6)
in fresh subprocesses with ``RINGSTAB_NUMBA=1`` and ``RINGSTAB_NUMBA=0``.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from ringstab import kernels, ring

# a small closure first, so numba's cache load is not billed to the timed run
E2E = ("import time; from ringstab import ring; from ringstab.subgroups import elementary_group; "
       "elementary_group(ring.zmod(2), 3); "
       "t=time.perf_counter(); E=elementary_group(ring.zmod(6), 3); print(len(E), time.perf_counter()-t)")


def best_of(fn, repeat):
    fn()                                        # warm-up (numba compile / cache load)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(R, n, N, seed=0):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, R.order, size=(N, n, n)).astype(R.dtype)
    B = rng.integers(0, R.order, size=(N, n, n)).astype(R.dtype)
    G = rng.integers(0, R.order, size=(16, n, n)).astype(R.dtype)
    ident = np.full((n, n), R.zero, dtype=R.dtype)
    np.fill_diagonal(ident, R.one)
    add, mul = R.add_table, R.mul_table
    return {
        "matmul_pairs": lambda acc: kernels.matmul_pairs(A, B, add, mul, accel=acc),
        "matmul_outer": lambda acc: kernels.matmul_outer(A[: N // 16], G, add, mul, accel=acc),
        "encode": lambda acc: kernels.encode(A, R.order, accel=acc),
        "invert": lambda acc: kernels.invert(A[: N // 8], add, mul, ident, accel=acc),
    }


def run_kernels(repeat):
    rows = []
    for R, n, N in ((ring.zmod(4), 3, 1 << 16), (ring.zmod(6), 4, 1 << 15), (ring.matrix_ring(2, ring.zmod(2)), 3, 1 << 15)):
        for name, fn in cases(R, n, N).items():
            a, b = fn(True), fn(False)
            same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
            t_nb = best_of(lambda: fn(True), repeat)
            t_np = best_of(lambda: fn(False), repeat)
            rows.append((f"{name} {R.name} n={n}", t_nb, t_np, same))
    return rows


def run_end_to_end():
    out = {}
    for flag in ("1", "0"):
        env = dict(os.environ, RINGSTAB_NUMBA=flag)
        subprocess.run([sys.executable, "-c", E2E], env=env, check=True, capture_output=True)  # warm cache
        res = subprocess.run([sys.executable, "-c", E2E], env=env, check=True, capture_output=True, text=True)
        size, secs = res.stdout.split()
        out[flag] = (int(size), float(secs))
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--skip-end-to-end", action="store_true")
    args = p.parse_args()
    print(f"{'kernel':<36}{'numba (ms)':>12}{'numpy (ms)':>12}{'speedup':>9}  equal")
    for label, t_nb, t_np, same in run_kernels(args.repeat):
        print(f"{label:<36}{t_nb * 1e3:>12.2f}{t_np * 1e3:>12.2f}{t_np / t_nb:>8.1f}x  {same}")
    if not args.skip_end_to_end:
        res = run_end_to_end()
        (s1, t1), (s0, t0) = res["1"], res["0"]
        assert s1 == s0
        print(f"\nE(3, Z/6) closure ({s1} elements): numba {t1:.2f}s, numpy {t0:.2f}s ({t0 / t1:.1f}x)")


if __name__ == "__main__":
    main()
