import math

import numpy as np
import pytest
from scipy.integrate import quad

from solitonlab import analytic
from solitonlab.params import ParameterError, PhysicalParams, derive_groups

P = PhysicalParams()
G0 = derive_groups(P, 0.0)


def groups_at(vbar):
    return derive_groups(P, vbar * G0.c)


def test_density_center_values():
    g = groups_at(0.6)
    z = np.array([0.0])
    dark = analytic.hgpe_density(z, 0.6, g.zeta, analytic.DARK)
    anti = analytic.hgpe_density(z, 0.6, g.zeta, analytic.ANTIDARK)
    assert dark[0] == pytest.approx(0.5 - 0.4, abs=1e-14)   # 1/2 - gamma/2
    assert anti[0] == pytest.approx(0.5 + 0.4, abs=1e-14)


def test_black_soliton_reaches_zero():
    g = groups_at(0.0)
    rho = analytic.hgpe_density(np.array([0.0]), 0.0, g.zeta, analytic.DARK)
    assert rho[0] == pytest.approx(0.0, abs=1e-14)


def test_mirror_identity():
    g = groups_at(0.5)
    z = np.linspace(-10, 10, 501)
    dark = analytic.hgpe_density(z, 0.5, g.zeta, analytic.DARK)
    anti = analytic.hgpe_density(z, 0.5, g.zeta, analytic.ANTIDARK)
    assert np.max(np.abs(dark + anti - 1.0)) < 1e-14


def test_condensate_branch_independent():
    g = groups_at(0.5)
    z = np.linspace(-10, 10, 501)
    rho_s = analytic.hgpe_condensate(z, 0.5, g.zeta)
    for branch in (analytic.DARK, analytic.ANTIDARK):
        rho = analytic.hgpe_density(z, 0.5, g.zeta, branch)
        assert np.max(np.abs(rho * (1.0 - rho) - rho_s)) < 1e-14


def test_gpe_density_is_wavefunction_modulus():
    z = np.linspace(-20, 20, 801)
    psi = analytic.gpe_wavefunction(z, 0.5, G0.lam, 0.25)
    rho = analytic.gpe_density(z, 0.5, G0.lam, 0.25)
    assert np.max(np.abs(np.abs(psi) ** 2 - rho)) < 1e-14


def test_gpe_center_depth():
    rho = analytic.gpe_density(np.array([0.0]), 0.6, G0.lam, 0.25)
    # dip depth gamma^2 * rho_g0 = 0.64 * 0.25
    assert rho[0] == pytest.approx(0.25 - 0.16, abs=1e-14)


def test_phase_ramp_matches_slope_quadrature():
    """Independent oracle: integrate the first-integral slope numerically."""
    vbar = 0.4
    g = groups_at(vbar)
    for branch in (analytic.DARK, analytic.ANTIDARK):
        for z_pt in (0.7, -1.3, 2.5):
            num, _ = quad(
                lambda s: analytic.hgpe_phase_slope(
                    np.array([s]), vbar, g.zeta, g.c, branch)[0],
                -40.0, z_pt, limit=200)
            closed = (analytic.hgpe_phase_ramp(
                np.array([z_pt]), vbar, g.zeta, g.c, branch)[0]
                - analytic.hgpe_phase_ramp(
                    np.array([-40.0]), vbar, g.zeta, g.c, branch)[0])
            assert closed == pytest.approx(num, abs=1e-9)


def test_phase_step_total():
    # total step magnitude (c_s/zeta)*pi, independent of vbar
    for vbar in (0.2, 0.5, 0.9):
        g = groups_at(vbar)
        z = np.array([-80.0, 80.0])
        ramp = analytic.hgpe_phase_ramp(z, vbar, g.zeta, g.c, analytic.DARK)
        step = ramp[1] - ramp[0]
        assert step == pytest.approx(-(g.c / g.zeta) * math.pi, rel=1e-9)


def test_phase_integration_matches_ramp():
    vbar = 0.3
    g = groups_at(vbar)
    z = np.linspace(-60, 60, 20001)
    phi, warning = analytic.hgpe_phase(z, vbar, g.zeta, g.c, analytic.DARK)
    assert warning is None
    ramp = analytic.hgpe_phase_ramp(z, vbar, g.zeta, g.c, analytic.DARK)
    # trapezoid integration is 2nd order in the grid spacing
    assert np.max(np.abs((phi - phi[0]) - (ramp - ramp[0]))) < 1e-4


def test_black_soliton_phase_warning():
    g = groups_at(0.0)
    z = np.linspace(-10, 10, 401)
    phi, warning = analytic.hgpe_phase(z, 0.0, g.zeta, g.c, analytic.DARK)
    assert warning == analytic.BLACK_SOLITON_WARNING
    assert phi[-1] - phi[0] == pytest.approx(-math.pi, abs=1e-14)
    anti, _ = analytic.hgpe_phase(z, 0.0, g.zeta, g.c, analytic.ANTIDARK)
    assert anti[-1] - anti[0] == pytest.approx(math.pi, abs=1e-14)


def test_phase_ramp_rejects_black():
    g = groups_at(0.0)
    with pytest.raises(ParameterError):
        analytic.hgpe_phase_ramp(np.array([0.0]), 0.0, g.zeta, g.c,
                                 analytic.DARK)


def test_vbar_out_of_range():
    with pytest.raises(ParameterError):
        analytic.hgpe_density(np.array([0.0]), 1.2, 1.0, analytic.DARK)


def test_kappa_convention():
    assert analytic.KAPPA == -1.0
