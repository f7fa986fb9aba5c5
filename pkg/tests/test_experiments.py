"""Sweeps, collisions, and the higher-level studies."""
import numpy as np
import pytest

from nls_spectra.errors import NoSignChange, OutOfRange
from nls_spectra.experiments import (SweepSpec, _merge_eigs,
                                     locate_collision, nullspace_report,
                                     run_sweep, verify_interlacing,
                                     worker_count)


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(1, [2.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        SweepSpec(1, [3.0, 2.0])
    with pytest.raises(OutOfRange):
        SweepSpec(1, [0.5, 2.0])
    with pytest.raises(OutOfRange):
        SweepSpec(3, [2.0, 6.0])   # above the n=3 existence threshold


def test_merge_eigs_keeps_multiplicity():
    # the same doubled eigenvalue seen by two shifts must stay doubled,
    # and near-duplicates across shifts must not inflate the count
    a = ([0.5 + 0j, 0.5 + 0j, 1.0 + 0j], [1e-12, 1e-12, 1e-12])
    b = ([0.5 + 1e-9j, 0.5 - 1e-9j, 2.0 + 0j], [1e-12, 1e-12, 1e-12])
    merged = _merge_eigs([a, b])
    vals = sorted(z.real for z, _ in merged)
    assert np.allclose(vals, [0.5, 0.5, 1.0, 2.0], atol=1e-8)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("NLS_SPECTRA_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.delenv("NLS_SPECTRA_THREADS")
    assert worker_count() >= 1


def test_small_sweep_deterministic_and_real():
    spec = SweepSpec(1, [2.0, 3.0], r_max=15.0, dr=0.05, eig_count=6)
    rows = run_sweep(spec)
    rows2 = run_sweep(spec)
    assert [(r.p, r.re, r.im, r.cls) for r in rows] == \
           [(r.p, r.re, r.im, r.cls) for r in rows2]
    # ground state: spectrum stays on the axes
    assert all(r.cls != "complex_quadruple" for r in rows)
    assert all(r.residual < 1e-8 for r in rows)
    assert [r.p for r in rows] == sorted(r.p for r in rows)


def test_interlacing_coarse():
    rep = verify_interlacing(2.0, dr=0.02, r_max=20.0)
    assert all(c["ok"] for c in rep["checks"])
    with pytest.raises(OutOfRange):
        verify_interlacing(2.0, n=2)


def test_nullspace_coarse():
    rep = nullspace_report(1, 2.0, dr=0.02, r_max=20.0)
    assert rep["ok"] and rep["measured"] == 4


def test_collision_deterministic():
    kw = dict(dr=0.04, r_max=30.0)
    a = locate_collision(1, 1, (1.40, 1.62), **kw)
    b = locate_collision(1, 1, (1.40, 1.62), **kw)
    assert a.p_star == b.p_star
    assert a.lambda_star == b.lambda_star
    assert a.kind == "off_axis_collision"
    # the coarse-mesh location still sits near the fine-mesh one
    assert a.p_star == pytest.approx(1.527, abs=5e-3)


def test_collision_no_sign_change():
    with pytest.raises(NoSignChange):
        locate_collision(1, 2, (1.08, 1.12), dr=0.04)
