"""Spectrum classification and the shift-invert eigensolver."""
import numpy as np
import pytest

from nls_spectra.eigen import (classify_spectrum, pairing_violations,
                               shift_invert_arnoldi, symmetric_eigs,
                               zero_tolerance)
from nls_spectra.errors import SingularShift
from nls_spectra.operators import BandedOperator


# ------------------------------------------------------- classification

def test_zero_tolerance_escalates_near_critical():
    base = zero_tolerance(0.01)
    near = zero_tolerance(0.01, p=4.99, p_c=5.0)
    far = zero_tolerance(0.01, p=3.0, p_c=5.0)
    assert near == pytest.approx(np.sqrt(0.01))
    assert far == base < near


def test_classify_basic_labels():
    vals = np.array([0.0, 1e-9, 0.5 + 0j, -0.5 + 0j, 0.3j, -0.3j,
                     1.7j, -1.7j, 0.2 + 0.4j, -0.2 + 0.4j,
                     0.2 - 0.4j, -0.2 - 0.4j])
    labels = classify_spectrum(vals, dr=0.01)
    by = dict(zip([complex(v) for v in vals], labels))
    assert by[0j] == "zero" and by[1e-9 + 0j] == "zero"
    assert by[0.5 + 0j] == by[-0.5 + 0j] == "real_pair"
    assert by[0.3j] == by[-0.3j] == "imaginary_pair"
    assert by[1.7j] == by[-1.7j] == "continuous_band"
    assert by[0.2 + 0.4j] == "complex_quadruple"


def test_classify_gap_extension():
    # a tight near-zero cluster absorbs neighbors within its own scale
    vals = np.array([1e-8, -1e-8, 2.5e-8, 0.5j, -0.5j])
    labels = classify_spectrum(vals, dr=0.01)
    assert labels.count("zero") == 3
    assert labels.count("imaginary_pair") == 2


def test_classify_band_edge():
    vals = np.array([0.995j, -0.995j, 1.0j, -1.0j])
    labels = classify_spectrum(vals, dr=0.01)
    assert all(c == "continuous_band" for c in labels)


def test_pairing_violations():
    ok = np.array([0.4j, -0.4j, 0.1 + 0.2j, -0.1 + 0.2j,
                   0.1 - 0.2j, -0.1 - 0.2j])
    assert not pairing_violations(ok)
    broken = np.array([0.4j, -0.4j, 0.1 + 0.2j])
    assert pairing_violations(broken)


# ----------------------------------------------------------- eigensolvers

def laplacian_1d(n, h=1.0):
    main = np.full(n, 2.0 / h ** 2)
    off = np.full(n - 1, -1.0 / h ** 2)
    return BandedOperator.from_diagonals({-1: off, 0: main, 1: off},
                                         symmetry_tag="symmetric")


def dirichlet_eigs(n, h=1.0):
    j = np.arange(1, n + 1)
    return 4.0 / h ** 2 * np.sin(j * np.pi / (2 * (n + 1))) ** 2


def test_symmetric_eigs_known_spectrum():
    n = 200
    got = symmetric_eigs(laplacian_1d(n), 6).eigenvalues
    assert np.allclose(got, dirichlet_eigs(n)[:6], rtol=1e-12)


def test_symmetric_eigs_rejects_nonsymmetric():
    op = BandedOperator.from_diagonals({0: np.ones(10),
                                        1: np.full(9, 2.0)})
    with pytest.raises(ValueError):
        symmetric_eigs(op, 2)


def test_shift_invert_diagonal_matrix():
    d = np.array([-2.0, -1.0, -0.3, 0.1, 0.4, 0.9, 1.5, 2.2, 3.3, 4.1])
    op = BandedOperator.from_diagonals({0: d})
    r = shift_invert_arnoldi(op, 0.35, 3, return_vectors=True)
    assert np.allclose(sorted(z.real for z in r.eigenvalues),
                       [0.1, 0.4, 0.9])
    assert max(r.residuals) < 1e-10
    A = op.toarray()
    for i, lam in enumerate(r.eigenvalues):
        v = r.eigenvectors[:, i]
        assert np.linalg.norm(A @ v - lam * v) < 1e-9


def test_shift_invert_nonsymmetric():
    # rotation-like block spectrum: +-i pairs scaled
    rng = np.random.default_rng(4)
    n = 80
    scales = 0.1 + rng.random(n // 2)
    diags_up = np.zeros(n - 1)
    diags_dn = np.zeros(n - 1)
    diags_up[::2] = scales
    diags_dn[::2] = -scales
    op = BandedOperator.from_diagonals({-1: diags_dn, 0: np.zeros(n),
                                        1: diags_up})
    r = shift_invert_arnoldi(op, 0.01 + 0.2j, 4)
    expected = np.sort_complex(1j * np.concatenate([scales, -scales]))
    for z in r.eigenvalues:
        assert min(abs(z - w) for w in expected) < 1e-9


def test_shift_invert_deterministic():
    d = np.linspace(-1, 2, 50)
    op = BandedOperator.from_diagonals({0: d})
    a = shift_invert_arnoldi(op, 0.11 + 0.02j, 5)
    b = shift_invert_arnoldi(op, 0.11 + 0.02j, 5)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.residuals, b.residuals)


def test_singular_shift_raises():
    d = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])
    op = BandedOperator.from_diagonals({0: d})
    with pytest.raises(SingularShift):
        shift_invert_arnoldi(op, 3.0, 2)


def test_multiplicity_captured():
    # a doubly repeated eigenvalue must appear twice
    d = np.array([0.5, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])
    op = BandedOperator.from_diagonals({0: d})
    got = sorted(z.real for z in shift_invert_arnoldi(op, 0.4 + 0.1j,
                                                      3).eigenvalues)
    assert np.allclose(got, [0.5, 0.5, 1.0], atol=1e-9)
