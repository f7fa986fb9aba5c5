"""Low-level banded linear-algebra kernels.

Banded LU factorization with partial pivoting and the matching
triangular solves, written once in a slice-based style that both numba
(default) and plain numpy execute correctly.  The active backend is
chosen at import time from the ``NLS_SPECTRA_BACKEND`` environment
variable (``numba`` or ``numpy``) and can be switched at runtime with
:func:`set_backend`, which is mainly useful for tests and benchmarks.

Storage convention (LAPACK ``gbtrf``-style): a matrix with lower
bandwidth ``kl`` and upper bandwidth ``ku`` is held in an array ``ab``
of shape ``(2*kl + ku + 1, n)`` with ``A[i, j]`` at
``ab[kl + ku + i - j, j]``.  The top ``kl`` rows are workspace for the
fill-in created by pivoting and must be zero on entry.
"""

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    _HAVE_NUMBA = False


def _factor_impl(ab, kl, ku, ipiv):
    """In-place banded LU with partial pivoting.

    Returns 0 on success, or ``j + 1`` if the pivot in column ``j``
    is exactly zero (matrix singular to working precision).
    """
    n = ab.shape[1]
    kv = kl + ku
    for j in range(n):
        km = min(kl, n - 1 - j)
        piv = 0
        pmax = abs(ab[kv, j])
        for i in range(1, km + 1):
            v = abs(ab[kv + i, j])
            if v > pmax:
                pmax = v
                piv = i
        ipiv[j] = j + piv
        if pmax == 0.0:
            return j + 1
        jmax = min(j + kv, n - 1)
        if piv != 0:
            for q in range(j, jmax + 1):
                t = ab[kv + j - q, q]
                ab[kv + j - q, q] = ab[kv + j + piv - q, q]
                ab[kv + j + piv - q, q] = t
        if km > 0:
            inv = 1.0 / ab[kv, j]
            ab[kv + 1:kv + km + 1, j] *= inv
            mult = ab[kv + 1:kv + km + 1, j]
            for q in range(j + 1, jmax + 1):
                f = ab[kv + j - q, q]
                if f != 0.0:
                    r0 = kv + j - q + 1
                    ab[r0:r0 + km, q] -= f * mult
    return 0


def _solve_impl(ab, kl, ku, ipiv, b):
    """Solve ``A x = b`` in place given the factorization from _factor_impl."""
    n = ab.shape[1]
    kv = kl + ku
    for j in range(n - 1):
        p = ipiv[j]
        if p != j:
            t = b[j]
            b[j] = b[p]
            b[p] = t
        km = min(kl, n - 1 - j)
        if km > 0:
            b[j + 1:j + km + 1] -= b[j] * ab[kv + 1:kv + km + 1, j]
    for j in range(n - 1, -1, -1):
        b[j] = b[j] / ab[kv, j]
        i0 = max(0, j - kv)
        if i0 < j:
            b[i0:j] -= b[j] * ab[kv + i0 - j:kv, j]
    return b


def _matvec_impl(band, kl, ku, x, y):
    """y := A x for plain band storage band[ku + i - j, j] = A[i, j]."""
    n = band.shape[1]
    y[:] = 0.0
    for j in range(n):
        i0 = max(0, j - ku)
        i1 = min(n - 1, j + kl)
        y[i0:i1 + 1] += band[ku + i0 - j:ku + i1 - j + 1, j] * x[j]
    return y


if _HAVE_NUMBA:
    _factor_numba = numba.njit(cache=True, nogil=True)(_factor_impl)
    _solve_numba = numba.njit(cache=True, nogil=True)(_solve_impl)
    _matvec_numba = numba.njit(cache=True, nogil=True)(_matvec_impl)

_BACKENDS = {
    "numpy": (_factor_impl, _solve_impl, _matvec_impl),
}
if _HAVE_NUMBA:
    _BACKENDS["numba"] = (_factor_numba, _solve_numba, _matvec_numba)

_active = os.environ.get("NLS_SPECTRA_BACKEND", "numba" if _HAVE_NUMBA else "numpy")
if _active not in _BACKENDS:
    raise ValueError(
        f"NLS_SPECTRA_BACKEND={_active!r} not available; "
        f"choose from {sorted(_BACKENDS)}"
    )


def set_backend(name):
    """Select the kernel backend ('numba' or 'numpy'). Returns the old name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {sorted(_BACKENDS)}")
    old = _active
    _active = name
    return old


def backend_name():
    return _active


def bandlu_factor(ab, kl, ku):
    """Factor a banded matrix in place; returns (ipiv, info).

    ``info`` is 0 on success, ``j + 1`` when column ``j`` has a zero
    pivot.  ``ab`` must use the expanded (2*kl + ku + 1, n) storage
    with zeroed workspace rows.
    """
    ipiv = np.empty(ab.shape[1], dtype=np.int64)
    info = _BACKENDS[_active][0](ab, kl, ku, ipiv)
    return ipiv, info


def bandlu_solve(ab, kl, ku, ipiv, b, overwrite=False):
    """Solve with a factored band matrix; returns the solution vector."""
    x = b if overwrite else b.copy()
    return _BACKENDS[_active][1](ab, kl, ku, ipiv, x)


def band_matvec(band, kl, ku, x):
    """Multiply plain band storage (kl + ku + 1, n) by a vector."""
    y = np.empty_like(x)
    return _BACKENDS[_active][2](band, kl, ku, x, y)
