"""Timing comparison of the two kernel backends.

The hot kernels (banded complex LU factorization, triangular solves,
banded matvec) exist in a compiled (numba) and a pure-numpy variant;
this script times both on problem sizes representative of the package's
eigensolves and prints a table.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from nls_spectra import _kernels
from nls_spectra.linearized import build_cal_L
from nls_spectra.groundstate import solve_ground_state
from nls_spectra.mesh import line_mesh


def _timeit(fn, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(backend):
    _kernels.set_backend(backend)
    mesh = line_mesh(30.0, 0.01)
    profile = solve_ground_state(1, 3.0, mesh=mesh)
    op = build_cal_L(profile, mesh).interleaved()
    ab = op.lu_storage(shift=0.01 + 0.01j)
    n = ab.shape[1]
    rng = np.random.default_rng(7)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)

    rows = {}
    rows["factor"] = _timeit(
        lambda: _kernels.bandlu_factor(ab.copy(), op.kl, op.ku))
    ipiv, info = _kernels.bandlu_factor(ab.copy(), op.kl, op.ku)
    fab = ab.copy()
    _kernels.bandlu_factor(fab, op.kl, op.ku)
    rows["solve"] = _timeit(
        lambda: _kernels.bandlu_solve(fab, op.kl, op.ku, ipiv, x))
    band = op.band.astype(complex)
    rows["matvec"] = _timeit(
        lambda: _kernels.band_matvec(band, op.kl, op.ku, x))
    return n, rows


def main():
    results = {}
    for backend in ("numba", "numpy"):
        try:
            n, rows = bench(backend)
            results[backend] = rows
        except Exception as exc:  # numba may be unavailable
            print(f"{backend}: skipped ({exc})")
    if len(results) < 2:
        return
    print(f"\nbanded kernels, n = {n}, kl = ku = 3 (interleaved flow "
          f"operator at dr = 0.01)")
    print(f"{'kernel':<10} {'numba [ms]':>12} {'numpy [ms]':>12} "
          f"{'speedup':>9}")
    for key in ("factor", "solve", "matvec"):
        a = results["numba"][key] * 1e3
        b = results["numpy"][key] * 1e3
        print(f"{key:<10} {a:>12.3f} {b:>12.3f} {b / a:>8.1f}x")


if __name__ == "__main__":
    main()
