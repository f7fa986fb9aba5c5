"""Banded and block operator containers."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nls_spectra.operators import (BandedOperator, BlockOperator,
                                   symmetrize_tridiagonal)


def random_banded(rng, n, kl, ku):
    diags = {}
    for off in range(-kl, ku + 1):
        diags[off] = rng.standard_normal(n - abs(off))
    return BandedOperator.from_diagonals(diags)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(6, 40), kl=st.integers(0, 3), ku=st.integers(0, 3),
       seed=st.integers(0, 2**31))
def test_sparse_roundtrip_and_matvec(n, kl, ku, seed):
    rng = np.random.default_rng(seed)
    op = random_banded(rng, n, kl, ku)
    A = op.toarray()
    back = BandedOperator.from_sparse(op.to_sparse())
    assert np.allclose(back.toarray(), A)
    x = rng.standard_normal(n)
    assert np.allclose(op.matvec(x), A @ x)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(6, 30), seed=st.integers(0, 2**31))
def test_transpose_and_product(n, seed):
    rng = np.random.default_rng(seed)
    a = random_banded(rng, n, 1, 2)
    b = random_banded(rng, n, 2, 1)
    assert np.allclose(a.transpose().toarray(), a.toarray().T)
    assert np.allclose((a @ b).toarray(), a.toarray() @ b.toarray())


def test_add_scale_diagonal():
    rng = np.random.default_rng(3)
    op = random_banded(rng, 12, 1, 1)
    A = op.toarray()
    v = rng.standard_normal(12)
    assert np.allclose(op.add_diagonal(v).toarray(), A + np.diag(v))
    assert np.allclose((op * 2.5).toarray(), 2.5 * A)
    other = random_banded(rng, 12, 1, 1)
    assert np.allclose((op + other).toarray(), A + other.toarray())
    assert np.allclose((op - other).toarray(), A - other.toarray())


def test_identity():
    eye = BandedOperator.identity(9)
    assert np.allclose(eye.toarray(), np.eye(9))


def test_symmetrize_tridiagonal_preserves_spectrum():
    # a tridiagonal matrix with positive off-diagonal products is
    # diagonally similar to a symmetric one: same eigenvalues
    rng = np.random.default_rng(11)
    n = 25
    lo = 0.5 + rng.random(n - 1)
    hi = 0.5 + rng.random(n - 1)
    d = rng.standard_normal(n)
    op = BandedOperator.from_diagonals({-1: lo, 0: d, 1: hi})
    sym = symmetrize_tridiagonal(op)
    S = sym.toarray()
    assert np.allclose(S, S.T)
    ev_sym = np.sort(np.linalg.eigvalsh(S))
    ev_orig = np.sort(np.linalg.eigvals(op.toarray()).real)
    assert np.allclose(ev_sym, ev_orig, rtol=1e-9, atol=1e-10)


def test_block_operator_matvec_and_interleave():
    rng = np.random.default_rng(5)
    n = 14
    A = random_banded(rng, n, 1, 1)
    B = random_banded(rng, n, 2, 2)
    op = BlockOperator([[None, A], [B, None]])
    x = rng.standard_normal(2 * n)
    dense = np.zeros((2 * n, 2 * n))
    dense[:n, n:] = A.toarray()
    dense[n:, :n] = B.toarray()
    assert np.allclose(op.matvec(x), dense @ x)

    inter = op.interleaved()
    xi = op.interleave_vector(x)
    assert np.allclose(op.deinterleave_vector(xi), x)
    yi = inter.matvec(xi)
    assert np.allclose(op.deinterleave_vector(yi), dense @ x)


def test_upper_band_layout():
    rng = np.random.default_rng(9)
    op = random_banded(rng, 10, 2, 2)
    sym = BandedOperator.from_sparse(
        op.to_sparse() + op.to_sparse().T)
    ub = sym.upper_band()
    A = sym.toarray()
    n = 10
    for j in range(n):
        for i in range(max(0, j - 2), j + 1):
            assert ub[2 + i - j, j] == pytest.approx(A[i, j])
