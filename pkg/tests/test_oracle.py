"""Closed-form spectral ladder, bounds, and catalogs."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nls_spectra.errors import OutOfRange
from nls_spectra.groundstate import solve_ground_state
from nls_spectra.mesh import line_mesh, make_mesh
from nls_spectra.oracle import (bifurcation_prediction, closed_form_Q,
                                hierarchy_lower_bound, interlacing_bounds,
                                interlacing_regime, k_index, ladder,
                                lambda_index, mu1_lower_bound,
                                mu2_upper_bound, nullspace_catalog,
                                p_critical, predicted_hierarchy_spectrum,
                                resonance_profile, w_functional)


def test_ladder_values_p3():
    lad = ladder(3.0)
    # k_m = 2 - m, lambda_m = 1 - k_m^2 at p = 3
    assert lad.entries[0].lam == pytest.approx(-3.0)
    assert lad.entries[1].lam == pytest.approx(0.0)
    assert lad.entries[0].belongs_to == "Lplus"
    for e in lad.entries[1:]:
        assert e.belongs_to == "both"


@settings(max_examples=40, deadline=None)
@given(p=st.floats(1.01, 12.0))
def test_ladder_monotone(p):
    lad = ladder(p)
    lams = [e.lam for e in lad.entries]
    ks = [e.k for e in lad.entries]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert all(b < a for a, b in zip(ks, ks[1:]))
    assert all(lam <= 1.0 + 1e-12 for lam in lams)
    assert lams[0] == pytest.approx(1 - ((p + 1) / 2) ** 2)
    assert lams[1] == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(p=st.floats(1.05, 6.0))
def test_closed_form_satisfies_ode(p):
    x = np.linspace(-8, 8, 2001)
    q = closed_form_Q(p, x)
    h = x[1] - x[0]
    lap = (q[:-2] - 2 * q[1:-1] + q[2:]) / h ** 2
    res = -lap - q[1:-1] ** p + q[1:-1]
    assert np.max(np.abs(res)) < 5e-3


def test_interlacing_regime():
    # regime k satisfies p_{k+2} <= p < p_{k+1} with p_m = (m+1)/(m-1)
    assert interlacing_regime(2.0) == 1
    assert interlacing_regime(2.5) == 1
    assert interlacing_regime(1.6) == 3   # p_5 = 1.5 <= 1.6 < p_4 = 5/3
    assert interlacing_regime(1.3) == 6   # p_8 = 9/7 <= 1.3 < p_7 = 4/3
    with pytest.raises(OutOfRange):
        interlacing_regime(3.5)


def test_interlacing_bounds_p2():
    b = interlacing_bounds(2.0, 1)
    assert b.lower == pytest.approx(lambda_index(2.0, 2) ** 2)  # 0.5625
    assert b.lower == pytest.approx(0.5625)
    assert b.sharper_lower == pytest.approx(0.75)  # lambda_2 * lambda_3
    assert b.upper == pytest.approx(1.0)
    assert b.upper_inclusive
    with pytest.raises(OutOfRange):
        interlacing_bounds(2.0, 2)


def test_mu_bounds():
    # lower bound -(1/16)(p-1)^3 (p-5) for p >= 5
    assert mu1_lower_bound(6.0) == pytest.approx(-125.0 / 16.0)
    assert mu1_lower_bound(5.0) == pytest.approx(0.0)
    for p in (1.5, 2.0, 2.5):
        assert 0 < mu2_upper_bound(p) < 1.0


@pytest.mark.parametrize("p,j", [(1.5, 0), (1.5, 2), (2.0, 1), (3.0, 3)])
def test_hierarchy_predictions_simple(p, j):
    eigs = predicted_hierarchy_spectrum(p, j)
    assert sorted(eigs) == eigs
    assert len(set(np.round(eigs, 12))) == len(eigs)  # all simple
    assert all(e >= hierarchy_lower_bound(p, j) - 1e-12 for e in eigs)


def test_critical_exponents():
    assert p_critical(1) == pytest.approx(5.0)
    assert p_critical(2) == pytest.approx(3.0)
    assert p_critical(3) == pytest.approx(1 + 4.0 / 3.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bifurcation_coefficient_negative(n):
    p_c = p_critical(n)
    mesh = line_mesh(20.0, 0.02) if n == 1 else make_mesh(n, r_max=20.0,
                                                          dr=0.02)
    prof = solve_ground_state(n, p_c, mesh=mesh)
    pred = bifurcation_prediction(n, prof)
    assert pred.a_coeff < 0
    lam_p, lam_m = pred.lambda_pair(p_c + 0.01)
    assert lam_p.real > 0 and lam_m == -lam_p


@pytest.mark.parametrize("n,p,expected", [
    (1, 2.0, 4), (1, 5.0, 6), (2, 2.0, 6), (2, 3.0, 8), (3, 2.0, 8),
])
def test_nullspace_catalog(n, p, expected):
    cat = nullspace_catalog(n, p)
    assert cat.expected_dim == expected
    assert len(cat.entries) == expected


def test_w_functional_known_value():
    mesh = line_mesh(100.0, 0.01)
    # f = 1: integral of 1/(1+x^2) over (-R, R) is 2 atan(R)
    val = w_functional(np.ones(mesh.size), mesh)
    assert val == pytest.approx(math.sqrt(2 * math.atan(100.0)), rel=1e-4)


def test_resonance_profile_shape():
    mesh = line_mesh(50.0, 0.02)
    u3 = resonance_profile(mesh)
    x = mesh.nodes()
    # 1 - Q^2 at p = 3: equals 1 - 2 sech^2(x), -1 at the origin, -> 1
    assert u3[mesh.size // 2] == pytest.approx(-1.0)
    assert u3[-1] == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(u3, 1 - 2.0 / np.cosh(x) ** 2, atol=1e-12)


def test_k_index_consistency():
    for p in (1.5, 2.0, 3.0):
        for m in range(5):
            k = k_index(p, m)
            assert lambda_index(p, m) == pytest.approx(1 - k * k)
