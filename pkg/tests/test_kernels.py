"""Banded LU factorization and matvec kernels."""
import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from nls_spectra._kernels import (backend_name, band_matvec, bandlu_factor,
                                  bandlu_solve, set_backend)


def random_band(rng, n, kl, ku, dtype=float):
    band = rng.standard_normal((kl + ku + 1, n))
    if np.issubdtype(dtype, np.complexfloating):
        band = band + 1j * rng.standard_normal(band.shape)
    band[ku] += 4.0  # keep well conditioned
    # zero out the corners that lie outside the matrix
    for i in range(kl + ku + 1):
        off = ku - i
        if off > 0:
            band[i, :off] = 0.0
        elif off < 0:
            band[i, off:] = 0.0
    return band.astype(dtype)


def band_to_dense(band, kl, ku):
    n = band.shape[1]
    A = np.zeros((n, n), dtype=band.dtype)
    for i in range(n):
        for j in range(max(0, i - kl), min(n, i + ku + 1)):
            A[i, j] = band[ku + i - j, j]
    return A


@settings(max_examples=25, deadline=None)
@given(n=st.integers(5, 60), kl=st.integers(0, 4), ku=st.integers(0, 4),
       seed=st.integers(0, 2**31), cplx=st.booleans())
def test_lu_solve_matches_scipy(n, kl, ku, seed, cplx):
    rng = np.random.default_rng(seed)
    dtype = complex if cplx else float
    band = random_band(rng, n, kl, ku, dtype)
    b = rng.standard_normal(n).astype(dtype)
    if cplx:
        b = b + 1j * rng.standard_normal(n)
    expected = sla.solve_banded((kl, ku), band, b)

    ab = np.zeros((2 * kl + ku + 1, n), dtype=dtype)
    ab[kl:] = band
    ipiv, info = bandlu_factor(ab, kl, ku)
    assert info == 0
    x = bandlu_solve(ab, kl, ku, ipiv, b.copy())
    assert np.allclose(x, expected, rtol=1e-10, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(5, 60), kl=st.integers(0, 4), ku=st.integers(0, 4),
       seed=st.integers(0, 2**31))
def test_matvec_matches_dense(n, kl, ku, seed):
    rng = np.random.default_rng(seed)
    band = random_band(rng, n, kl, ku)
    x = rng.standard_normal(n)
    A = band_to_dense(band, kl, ku)
    assert np.allclose(band_matvec(band, kl, ku, x), A @ x,
                       rtol=1e-12, atol=1e-13)


def test_singular_matrix_reports_info():
    n, kl, ku = 6, 1, 1
    band = np.zeros((kl + ku + 1, n))
    band[ku] = 1.0
    band[ku, n - 1] = 0.0  # exact zero pivot in the last column
    ab = np.zeros((2 * kl + ku + 1, n))
    ab[kl:] = band
    _, info = bandlu_factor(ab, kl, ku)
    assert info > 0


def test_backends_agree():
    rng = np.random.default_rng(7)
    n, kl, ku = 40, 3, 3
    band = random_band(rng, n, kl, ku, complex)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    ab0 = np.zeros((2 * kl + ku + 1, n), dtype=complex)
    ab0[kl:] = band

    results = {}
    original = backend_name()
    try:
        for name in ("numpy", "numba"):
            try:
                set_backend(name)
            except Exception:
                pytest.skip(f"backend {name} unavailable")
            ab = ab0.copy()
            ipiv, info = bandlu_factor(ab, kl, ku)
            assert info == 0
            x = bandlu_solve(ab, kl, ku, ipiv, b.copy())
            y = band_matvec(band, kl, ku, b)
            results[name] = (ab, x, y)
    finally:
        set_backend(original)
    a, b_ = results["numpy"], results["numba"]
    # instruction scheduling differs between the two backends, so agreement
    # is to rounding error, not bit-for-bit
    for u, v in zip(a, b_):
        assert np.allclose(u, v, rtol=1e-13, atol=1e-14)
