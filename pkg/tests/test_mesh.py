"""Radial and line meshes, quadrature, Laplacian discretizations."""
import math

import numpy as np
import pytest

from nls_spectra.errors import InvalidMesh
from nls_spectra.mesh import (build_radial_laplacian, line_mesh, make_mesh,
                              RadialMesh)


def test_line_mesh_nodes_symmetric():
    mesh = line_mesh(10.0, 0.1)
    x = mesh.nodes()
    assert x[0] == pytest.approx(-10.0 + 0.1)
    assert x[-1] == pytest.approx(10.0 - 0.1)
    assert np.allclose(x + x[::-1], 0.0, atol=1e-12)
    assert 0.0 in x


def test_half_mesh_nodes():
    mesh = make_mesh(1, r_max=10.0, dr=0.1)
    r = mesh.nodes()
    assert r[0] == 0.0
    assert r[-1] == pytest.approx(10.0 - 0.1)


def test_staggered_mesh_avoids_origin():
    mesh = make_mesh(2, r_max=10.0, dr=0.1)
    r = mesh.nodes()
    assert mesh.staggered
    assert r[0] == pytest.approx(0.05)
    assert np.all(r > 0)


@pytest.mark.parametrize("bad", [
    dict(dr=-0.1),
    dict(dr=0.0),
    dict(r_max=0.2, dr=0.1),      # too few points
])
def test_mesh_validation(bad):
    kw = dict(n=1, r_max=10.0, dr=0.1)
    kw.update(bad)
    with pytest.raises(InvalidMesh):
        make_mesh(**kw)


def test_inconsistent_point_count_rejected():
    with pytest.raises(InvalidMesh):
        RadialMesh(r_max=10.0, dr=0.1, n_points=55, dim=1)


@pytest.mark.parametrize("n,exact", [
    (1, math.sqrt(math.pi) / 2),   # int_0^inf e^{-r^2} dr
    (2, 0.5),                      # int_0^inf e^{-r^2} r dr
    (3, math.sqrt(math.pi) / 4),   # int_0^inf e^{-r^2} r^2 dr
])
def test_quadrature_gaussian(n, exact):
    mesh = make_mesh(n, r_max=15.0, dr=0.005)
    val = mesh.integrate(np.exp(-mesh.nodes() ** 2))
    assert val == pytest.approx(exact, rel=1e-5)


def test_quadrature_line():
    mesh = line_mesh(15.0, 0.005)
    val = mesh.integrate(np.exp(-mesh.nodes() ** 2))
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-6)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_radial_laplacian_order(n):
    # -Delta applied to e^{-r^2/2}: exact value (r^2 - n) e^{-r^2/2}
    errs = []
    for dr in (0.08, 0.04, 0.02):
        mesh = make_mesh(n, r_max=12.0, dr=dr)
        r = mesh.nodes()
        f = np.exp(-(r ** 2) / 2)
        exact = -(r ** 2 - n) * f
        got = build_radial_laplacian(mesh).matvec(f)
        interior = r < 8.0
        errs.append(np.max(np.abs(got - exact)[interior]))
    orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(orders) >= 1.8


def test_angular_term():
    # adding the centrifugal index k appends +k^2/r^2 (operator is -Delta)
    mesh = make_mesh(2, r_max=10.0, dr=0.05)
    r = mesh.nodes()
    f = np.exp(-(r ** 2) / 2)
    base = build_radial_laplacian(mesh).matvec(f)
    with_k = build_radial_laplacian(mesh, angular_index=3).matvec(f)
    # the origin closure also changes with the angular index, so compare
    # away from the first few rows
    keep = r > 1.0
    assert np.allclose((with_k - base)[keep], ((9.0 / r ** 2) * f)[keep],
                       rtol=1e-10, atol=1e-12)
