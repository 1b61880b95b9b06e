"""Spin-chain image of the hard-core hydrodynamic fields.

The hard-core boson fields (rho, phi) map onto a spin-1/2 chain in the
easy-plane ferromagnetic regime: S_z is the deviation from half filling
and the transverse magnetization carries the condensate phase.  The
soliton becomes a traveling twist of the magnetization cone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams


@dataclass
class SpinField:
    """Classical spin-1/2 field (|S| = 1/2 pointwise)."""

    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def theta(self) -> np.ndarray:
        """Polar angle from the +z axis, in [0, pi]."""
        return np.arccos(np.clip(2.0 * self.sz, -1.0, 1.0))

    @property
    def phi(self) -> np.ndarray:
        """Azimuthal angle in (-pi, pi]."""
        return np.arctan2(self.sy, self.sx)


def to_spins(rho, phi) -> SpinField:
    """Map density and phase to the spin field.

    S_z = 1/2 - rho, and the in-plane components have magnitude
    sqrt(1/4 - S_z^2) = sqrt(rho(1-rho)) -- exactly the condensate
    amplitude -- at azimuth phi.
    """
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if rho.shape != phi.shape:
        raise ValueError(f"shape mismatch: rho {rho.shape} vs phi {phi.shape}")
    if np.any(rho < 0.0) or np.any(rho > 1.0):
        raise ValueError("rho must lie in [0, 1]")
    sz = 0.5 - rho
    m_perp = np.sqrt(np.maximum(0.25 - sz * sz, 0.0))
    return SpinField(sx=m_perp * np.cos(phi), sy=m_perp * np.sin(phi), sz=sz)


def inplane_mag_sq(spins: SpinField) -> np.ndarray:
    """Squared transverse magnetization S_x^2 + S_y^2 = rho(1-rho)."""
    return spins.sx * spins.sx + spins.sy * spins.sy


def spin_chain_params(p: PhysicalParams) -> dict:
    """Exchange couplings of the equivalent anisotropic spin chain.

    Planar exchange t, easy-plane anisotropy g = t - V (ferromagnetic
    order needs g > 0), and the longitudinal field h_z = g(1 - 2 rho0)
    that tilts the uniform cone to polar angle arccos(1 - 2 rho0).
    """
    p.validate()
    g = p.t - p.V
    h_z = g * (1.0 - 2.0 * p.rho0)
    return {
        "exchange": p.t,
        "anisotropy": g,
        "field": h_z,
        "cone_angle": math.acos(max(-1.0, min(1.0, 1.0 - 2.0 * p.rho0))),
    }
