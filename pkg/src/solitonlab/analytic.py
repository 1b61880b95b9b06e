"""Closed-form soliton profiles, phases, and pointwise evaluation.

All evaluators are vectorized over the position array and pure; the
position argument is measured in lattice units, with the soliton center
as a free translation parameter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DerivedGroups, ParameterError

DARK = "dark"
ANTIDARK = "antidark"

# Continuity convention: rho_t = KAPPA * (hbar/m) * d_x[rho(1-rho) phi_x].
# Fixed by deriving the hydrodynamic pair from the order-parameter equation
# alone; positive vbar then moves the soliton toward +x.
KAPPA = -1.0

BLACK_SOLITON_WARNING = "black soliton: phase step discontinuous"


@dataclass
class Profile:
    """A sampled field on a uniform 1D grid with metadata."""

    z: np.ndarray
    values: np.ndarray
    kind: str           # hgpe-density | hgpe-condensate | hgpe-phase |
                        # gpe-wavefunction | gpe-density
    branch: str = "n/a"
    groups: DerivedGroups | None = None


def _check_vbar(vbar: float) -> float:
    if not 0.0 <= vbar < 1.0:
        raise ParameterError(f"vbar >= 1 (vbar={vbar})")
    return math.sqrt(1.0 - vbar * vbar)


def _branch_sign(branch: str) -> float:
    if branch == DARK:
        return -1.0
    if branch == ANTIDARK:
        return +1.0
    raise ValueError(f"unknown branch {branch!r}")


def hgpe_density(z, vbar: float, zeta: float, branch: str, center: float = 0.0):
    """Hard-core particle density 1/2 +/- (gamma/2) sech(z/width)."""
    gamma = _check_vbar(vbar)
    width = 1.0 / (2.0 * gamma * zeta)
    sech = 1.0 / np.cosh((np.asarray(z, dtype=float) - center) / width)
    return 0.5 + _branch_sign(branch) * 0.5 * gamma * sech


def hgpe_condensate(z, vbar: float, zeta: float, center: float = 0.0):
    """Hard-core condensate density 1/4 - (gamma^2/4) sech^2(z/width).

    Branch-independent: the dark and antidark particle-density branches
    produce the identical condensate dip.
    """
    gamma = _check_vbar(vbar)
    width = 1.0 / (2.0 * gamma * zeta)
    sech = 1.0 / np.cosh((np.asarray(z, dtype=float) - center) / width)
    return 0.25 - 0.25 * gamma * gamma * sech * sech


def gpe_wavefunction(z, vbar: float, lam: float, rho_g0: float, center: float = 0.0):
    """Dark-soliton wave function sqrt(rho_g0) * (gamma tanh(gamma lam z) + i vbar)."""
    gamma = _check_vbar(vbar)
    u = gamma * lam * (np.asarray(z, dtype=float) - center)
    return math.sqrt(rho_g0) * (gamma * np.tanh(u) + 1j * vbar)


def gpe_density(z, vbar: float, lam: float, rho_g0: float, center: float = 0.0):
    """Condensate density rho_g0 * (1 - gamma^2 sech^2(gamma lam z))."""
    gamma = _check_vbar(vbar)
    u = gamma * lam * (np.asarray(z, dtype=float) - center)
    sech = 1.0 / np.cosh(u)
    return rho_g0 * (1.0 - gamma * gamma * sech * sech)


def hgpe_phase_slope(z, vbar: float, zeta: float, c_s: float, branch: str,
                     center: float = 0.0):
    """d(phi)/dz from the traveling-wave first integral of the continuity law.

    rho(1-rho) phi' = v (rho - rho0) with the integration constant fixed by
    phi' -> 0 in the uniform background.
    """
    gamma = _check_vbar(vbar)
    rho = hgpe_density(z, vbar, zeta, branch, center)
    v = vbar * c_s
    return v * (rho - 0.5) / (rho * (1.0 - rho))


def hgpe_phase_ramp(z, vbar: float, zeta: float, c_s: float, branch: str,
                    center: float = 0.0):
    """Closed form of the phase ramp: -/+ (c_s/zeta) arctan(sinh(z/width)/vbar).

    Dark branch takes the minus sign.  Total step is finite for vbar > 0,
    of magnitude (c_s/zeta)*pi.
    """
    gamma = _check_vbar(vbar)
    if vbar == 0.0:
        raise ParameterError("vbar = 0: phase ramp degenerates to a step")
    width = 1.0 / (2.0 * gamma * zeta)
    u = (np.asarray(z, dtype=float) - center) / width
    return _branch_sign(branch) * (c_s / zeta) * np.arctan(np.sinh(u) / vbar)


def hgpe_phase(z, vbar: float, zeta: float, c_s: float, branch: str,
               center: float = 0.0) -> tuple[np.ndarray, str | None]:
    """Phase profile phi(z), integrated from the left grid edge (phi = 0 there).

    Returns (phi, warning).  For vbar = 0 the integrand is singular at the
    density node; the limiting pi step of the order parameter's sign change
    is returned together with a warning.
    """
    z = np.asarray(z, dtype=float)
    _check_vbar(vbar)
    if vbar == 0.0:
        step = _branch_sign(branch) * math.pi  # sign matches the vbar > 0 ramp
        phi = np.where(z > center, step, 0.0)
        return phi, BLACK_SOLITON_WARNING
    slope = hgpe_phase_slope(z, vbar, zeta, c_s, branch, center)
    phi = np.concatenate(
        ([0.0], np.cumsum(0.5 * (slope[1:] + slope[:-1]) * np.diff(z)))
    )
    return phi, None
