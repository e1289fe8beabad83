"""Benchmark the compiled covariance kernel against the numpy fallback.

The kernel dominates the complex-momentum singularity scans (a Fig.-2
style sweep evaluates it on ~10^9 points), so this is the one hot loop
worth compiling.

    python benchmarks/bench_kernels.py [--n 2048x512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from ppkitaev import _core


def bench(backend: str, k: np.ndarray, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        _core.gamma_minus(0.4, 2.0, 0.9, k, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", default="2048x512", help="grid size RExIM")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    n_re, n_im = (int(s) for s in args.n.split("x"))
    re = np.linspace(-np.pi, np.pi, n_re, endpoint=False)
    im = np.linspace(0.0, 3.0, n_im)
    k = (re[None, :] + 1j * im[:, None]).ravel()
    print(f"grid: {n_re} x {n_im} = {k.size} momenta")
    results = {}
    for backend in _core.available_backends():
        dt = bench(backend, k, args.repeats)
        results[backend] = dt
        print(f"{backend:>7}: {dt * 1e3:8.2f} ms  ({k.size / dt / 1e6:7.1f} M pts/s)")
    if "cython" in results:
        print(f"speedup: {results['numpy'] / results['cython']:.2f}x")
    else:
        print("compiled kernel not built; run `python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
