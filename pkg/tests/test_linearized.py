"""Linearized operators: ladder spectra, factorizations, sectors."""
import numpy as np
import pytest

from nls_spectra.eigen import symmetric_eigs, shift_invert_arnoldi
from nls_spectra.groundstate import solve_ground_state
from nls_spectra.linearized import (apply_mirror_identity_residual,
                                    build_cal_L, build_factor_Sj, build_H,
                                    build_L_plus_minus, build_full2d_L,
                                    build_sector_Lmk, build_sector_LXk)
from nls_spectra.mesh import line_mesh, make_mesh
from nls_spectra.oracle import ladder, ladder_eigenfunction


@pytest.fixture(scope="module")
def line_setup():
    mesh = line_mesh(20.0, 0.02)
    prof = solve_ground_state(1, 3.0, mesh=mesh)
    return mesh, prof


def test_Lplus_Lminus_ladder(line_setup):
    mesh, prof = line_setup
    lad = ladder(3.0)
    expected_plus = [e.lam for e in lad.entries if e.lam < 0.95]
    expected_minus = [e.lam for e in lad.entries
                      if e.belongs_to == "both" and e.lam < 0.95]
    Lp = build_L_plus_minus(prof, mesh, "plus")
    Lm = build_L_plus_minus(prof, mesh, "minus")
    got_p = symmetric_eigs(Lp, len(expected_plus)).eigenvalues
    got_m = symmetric_eigs(Lm, len(expected_minus)).eigenvalues
    assert np.allclose(got_p, expected_plus, atol=5e-3)
    assert np.allclose(got_m, expected_minus, atol=5e-3)


def test_ladder_eigenfunction_overlap(line_setup):
    mesh, prof = line_setup
    Lp = build_L_plus_minus(prof, mesh, "plus")
    r = symmetric_eigs(Lp, 2, return_vectors=True)
    for m in (0, 1):
        v = ladder_eigenfunction(3.0, "plus", m, mesh.nodes())
        v = v / np.linalg.norm(v)
        overlap = abs(v @ r.eigenvectors[:, m])
        assert overlap > 0.999


def test_H_is_banded_symmetric(line_setup):
    mesh, prof = line_setup
    H = build_H(prof, mesh)
    assert H.kl == 3 and H.ku == 3
    assert H.is_symmetric()


def test_factorization_residual_order():
    lam0 = ladder(2.0).entries[0].lam
    for which, j, lam in (("plus", 0, lam0), ("minus", 1, 0.0)):
        errs = []
        for dr in (0.08, 0.04, 0.02):
            mesh = line_mesh(20.0, dr)
            prof = solve_ground_state(1, 2.0, mesh=mesh)
            L = build_L_plus_minus(prof, mesh, which=which)
            S = build_factor_Sj(prof, mesh, j)
            v = np.exp(-mesh.nodes() ** 2 / 4)
            res = (L.matvec(v) - lam * v) - S.transpose().matvec(S.matvec(v))
            errs.append(np.max(np.abs(res)))
        orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
        assert min(orders) >= 1.8, which


def test_mirror_identity_zero_vector(line_setup):
    mesh, prof = line_setup
    assert apply_mirror_identity_residual(prof, mesh, 1,
                                          np.zeros(mesh.size)) == 0.0


def test_mirror_identity_order():
    errs = []
    for dr in (0.08, 0.04, 0.02):
        mesh = line_mesh(20.0, dr)
        prof = solve_ground_state(1, 2.0, mesh=mesh)
        v = np.exp(-mesh.nodes() ** 2 / 4)
        errs.append(apply_mirror_identity_residual(prof, mesh, 1, v))
    orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(orders) >= 1.8


def test_flow_operator_pairing(line_setup):
    mesh, prof = line_setup
    calL = build_cal_L(prof, mesh)
    r = shift_invert_arnoldi(calL, 0.02 + 0.4j, 8, dr=mesh.dr, p=3.0,
                             p_c=5.0)
    assert not r.pairing_violations
    assert max(r.residuals) < 1e-10


def test_factorized_flow_matches_plain(line_setup):
    mesh, prof = line_setup
    plain = build_cal_L(prof, mesh)
    fact = build_cal_L(prof, mesh, factorized=True)
    shift = 0.02 + 0.4j
    a = shift_invert_arnoldi(plain, shift, 4).eigenvalues
    b = shift_invert_arnoldi(fact, shift, 4).eigenvalues
    for z in a:
        assert min(abs(z - w) for w in b) < 1e-6


def test_sector_union_identity():
    # sigma(L_{X_k}) = sigma(L_{m,k}) union sigma(L_{m,-k})
    mesh = make_mesh(2, r_max=15.0, dr=0.05, m=1)
    prof = solve_ground_state(2, 2.1, m=1, mesh=mesh)
    k = 1
    shift = 0.02 + 0.3j
    rx = shift_invert_arnoldi(build_sector_LXk(prof, mesh, k), shift, 8)
    union = []
    for kk in (k, -k):
        rm = shift_invert_arnoldi(build_sector_Lmk(prof, mesh, kk), shift, 4)
        union.extend(rm.eigenvalues)
    for z in rx.eigenvalues[:6]:
        assert min(abs(z - w) for w in union) < 1e-7


def test_full2d_kernel():
    # [0; phi] (the phase generator) lies in the kernel of the full
    # 2D linearization
    mesh_r = make_mesh(2, r_max=10.0, dr=0.05)
    prof = solve_ground_state(2, 3.0, mesh=mesh_r)
    mesh2 = make_mesh(2, r_max=10.0, dr=0.05, angular_points=16)
    A = build_full2d_L(prof, mesh2)
    N = mesh_r.size
    T = 16
    vec = np.concatenate([np.zeros(N * T), np.kron(np.ones(T), prof.values)])
    res = np.max(np.abs(A @ vec))
    assert res < 1e-8
