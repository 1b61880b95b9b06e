import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solitonlab import analytic, measure
from solitonlab.params import PhysicalParams, derive_groups


def test_fit_exact_synthetic():
    x = np.linspace(-5, 11, 400)
    y = 0.25 - 0.16 / np.cosh((x - 3.0) / 0.625) ** 2
    fit = measure.fit_sech2(x, y)
    assert fit.converged
    assert fit.orientation == -1
    assert fit.amplitude == pytest.approx(0.16, abs=1e-10)
    assert fit.width == pytest.approx(0.625, abs=1e-10)
    assert fit.center == pytest.approx(3.0, abs=1e-10)
    assert fit.background == pytest.approx(0.25, abs=1e-10)


def test_fit_analytic_condensate():
    p = PhysicalParams()
    g0 = derive_groups(p, 0.0)
    g = derive_groups(p, 0.6 * g0.c)
    z = np.linspace(-12, 12, 1201)
    rho_s = analytic.hgpe_condensate(z, 0.6, g.zeta)
    fit = measure.fit_sech2(z, rho_s)
    assert fit.amplitude == pytest.approx(0.16, abs=1e-10)  # gamma^2/4
    assert fit.width == pytest.approx(0.625, abs=1e-10)     # (2 gamma zeta)^-1


def test_fit_flat_profile_rejected():
    x = np.linspace(0, 10, 200)
    with pytest.raises(measure.FitError, match="no extremum"):
        measure.fit_sech2(x, np.full_like(x, 0.25))


def test_fit_bump_orientation():
    x = np.linspace(-10, 10, 500)
    y = 0.5 + 0.3 / np.cosh(x / 1.5) ** 2
    fit = measure.fit_sech2(x, y)
    assert fit.orientation == 1
    assert fit.amplitude == pytest.approx(0.3, abs=1e-10)


@settings(deadline=None, max_examples=40)
@given(shift=st.floats(-20, 20), offset=st.floats(-1, 1))
def test_fit_equivariance(shift, offset):
    """Translating x or shifting the background moves only x0/B."""
    x = np.linspace(-8, 8, 321)
    y = 0.25 - 0.12 / np.cosh(x / 0.8) ** 2
    base = measure.fit_sech2(x, y)
    moved = measure.fit_sech2(x + shift, y + offset)
    assert moved.amplitude == pytest.approx(base.amplitude, abs=1e-8)
    assert moved.width == pytest.approx(base.width, abs=1e-8)
    assert moved.center == pytest.approx(base.center + shift, abs=1e-7)
    assert moved.background == pytest.approx(base.background + offset, abs=1e-8)


def test_track_synthetic_translation():
    p = PhysicalParams()
    g0 = derive_groups(p, 0.0)
    vbar = 0.5
    g = derive_groups(p, vbar * g0.c)
    v = vbar * g0.c
    x = np.linspace(0, 40, 1601)
    snaps = []
    for t in np.linspace(0, 20, 9):
        rho_s = analytic.hgpe_condensate(x, vbar, g.zeta, center=8.0 + v * t)
        snaps.append((t, x, rho_s))
    tr = measure.track_soliton(snaps)
    assert tr.speed == pytest.approx(v, abs=1e-12)
    assert tr.r_squared == pytest.approx(1.0, abs=1e-12)
    assert tr.warning is None


def test_track_requires_five_snapshots():
    x = np.linspace(0, 10, 100)
    y = 1.0 - 0.5 / np.cosh(x - 5) ** 2
    with pytest.raises(ValueError):
        measure.track_soliton([(0.0, x, y)] * 4)


def test_track_hgpe_speed(hgpe_run):
    p = PhysicalParams()
    v = 0.5 * derive_groups(p, 0.0).c
    _, _, snaps = hgpe_run
    series = [(s.time, s.grid.x, s.rho) for s in snaps]
    tr = measure.track_soliton(series, length=snaps[0].grid.length,
                               window=5.0, x0=6.0)
    assert abs(tr.speed - v) / v < 0.01
    assert tr.warning is None


def test_track_gpe_speed(gpe_run):
    from solitonlab.params import GPE
    _, _, snaps = gpe_run
    p = snaps[0].params
    v = 0.5 * derive_groups(p, 0.0, GPE).c
    series = [(s.time, s.grid.x, np.abs(s.psi) ** 2) for s in snaps]
    tr = measure.track_soliton(series, length=snaps[0].grid.length,
                               window=8.0, x0=24.0)
    assert abs(tr.speed - v) / v < 0.01


def test_sound_speed_hgpe(sound_hgpe):
    assert abs(sound_hgpe.speed - math.sqrt(1.0 / 3.0)) < 0.02 * math.sqrt(1.0 / 3.0)


def test_sound_speed_gpe(sound_gpe, gpe_params):
    assert abs(sound_gpe.speed - math.sqrt(1.0 / 3.0)) < 0.02 * math.sqrt(1.0 / 3.0)


def test_sound_speed_eps_convergence(sound_gpe, gpe_params):
    from solitonlab.params import GPE
    half = measure.measure_sound_speed(GPE, gpe_params, eps=5e-4)
    assert abs(half.speed - sound_gpe.speed) / sound_gpe.speed < 0.005


def test_sound_speed_eps_too_large(gpe_params):
    from solitonlab.params import GPE
    with pytest.raises(measure.MeasurementError, match="eps too large"):
        measure.measure_sound_speed(GPE, gpe_params, eps=0.3)


def test_contrast_sweep_table():
    p = PhysicalParams()
    rows = measure.contrast_sweep([0.0, 0.4, 0.8, 0.95], p)
    assert rows[0].depth_analytic == pytest.approx(0.25, abs=1e-14)
    assert rows[2].depth_analytic == pytest.approx(0.09, abs=1e-14)
    depths = [r.depth_analytic for r in rows]
    assert all(a > b for a, b in zip(depths, depths[1:]))
    for r in rows:
        assert r.depth_fit == pytest.approx(r.depth_analytic, rel=1e-8)
        assert r.width_fit == pytest.approx(r.width_analytic, rel=1e-8)
