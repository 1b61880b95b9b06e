"""Physical parameters and derived dimensionless groups.

Natural units throughout: hbar = m = a = 1, so the hopping energy t = 1
sets the energy scale and the zero-point velocity c0 = hbar/(m*a) = 1
sets the velocity scale.  All lengths are in lattice units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

HBAR = 1.0
MASS = 1.0
SPACING = 1.0
C0 = HBAR / (MASS * SPACING)

# Sides of the model: strongly repulsive hard-core bosons vs the weakly
# interacting condensate.
HGPE = "hgpe"
GPE = "gpe"


class ParameterError(ValueError):
    """A physical precondition is violated (e.g. imaginary sound speed)."""


@dataclass(frozen=True)
class PhysicalParams:
    """Lattice/interaction constants in natural units.

    t      nn hopping (energy; fixed 1 by the unit choice, kept explicit)
    V      nn attraction, 0 <= V < t
    U      onsite repulsion (used on the condensate/GPE side)
    rho0   background density: particle density in (0, 1) on the hard-core
           side, condensate density > 0 on the GPE side
    """

    t: float = 1.0
    V: float = 1.0 / 3.0
    U: float = 0.0
    rho0: float = 0.5

    def validate(self, side: str = HGPE) -> None:
        if side not in (HGPE, GPE):
            raise ParameterError(f"unknown side {side!r}")
        if self.t <= 0.0:
            raise ParameterError(f"t <= 0 (t={self.t})")
        if self.V < 0.0:
            raise ParameterError(f"V < 0 (V={self.V})")
        if self.t - self.V <= 0.0:
            raise ParameterError(
                f"g <= 0: t - V = {self.t - self.V} gives an imaginary sound speed"
            )
        if side == HGPE:
            if not 0.0 < self.rho0 < 1.0:
                raise ParameterError(f"rho0 not in (0,1) (rho0={self.rho0})")
        else:
            if self.U <= 0.0:
                raise ParameterError(f"U <= 0 (U={self.U})")
            if self.rho0 <= 0.0:
                raise ParameterError(f"rho0 <= 0 (rho0={self.rho0})")


@dataclass(frozen=True)
class DerivedGroups:
    """Every derived/dimensionless quantity used downstream.

    Side-specific fields are None on the side where they have no meaning
    (c_s, rho_s0, h_z, zeta, width_hgpe on the GPE side; c_g on the
    hard-core side).  `c` is the sound speed of the active side.
    """

    side: str
    g: float            # t - V
    mu: float           # chemical potential of the uniform background
    c0: float
    c: float            # active sound speed
    c_s: float | None
    c_g: float | None
    rho_s0: float | None
    h_z: float | None   # g*(1 - 2*rho0), hard-core side only
    lam: float          # c / c0
    vbar: float         # v / c
    gamma: float        # sqrt(1 - vbar^2)
    zeta: float | None  # lam / sqrt(1 - 2*lam^2)
    xi: float           # healing length a / (sqrt(2)*lam)
    width_hgpe: float | None  # (2*gamma*zeta)^-1, lattice units
    width_gpe: float    # (2*gamma*lam)^-1, lattice units


def derive_groups(p: PhysicalParams, v: float, side: str = HGPE) -> DerivedGroups:
    """Compute all derived groups for lab-frame soliton speed v.

    Requires 0 <= v < c of the chosen side.
    """
    p.validate(side)
    g = p.t - p.V
    if side == HGPE:
        rho_s0 = p.rho0 * (1.0 - p.rho0)
        c = math.sqrt(2.0 * g * rho_s0 / MASS)
        mu = 2.0 * g * p.rho0
        h_z = g * (1.0 - 2.0 * p.rho0)
        c_s, c_g = c, None
    else:
        rho_s0 = None
        h_z = None
        c = math.sqrt(p.U * p.rho0 / MASS)
        mu = p.U * p.rho0
        c_s, c_g = None, c

    lam = c / C0
    vbar = v / c
    if not 0.0 <= vbar < 1.0:
        raise ParameterError(f"vbar >= 1: v={v}, c={c} (need 0 <= v < c)")
    gamma = math.sqrt(1.0 - vbar * vbar)

    two_lam2 = 2.0 * lam * lam
    if two_lam2 < 1.0:
        zeta = lam / math.sqrt(1.0 - two_lam2)
        width_hgpe = 1.0 / (2.0 * gamma * zeta)
    else:
        zeta = None
        width_hgpe = None
    xi = SPACING / (math.sqrt(2.0) * lam)
    width_gpe = 1.0 / (2.0 * gamma * lam)

    return DerivedGroups(
        side=side, g=g, mu=mu, c0=C0, c=c, c_s=c_s, c_g=c_g,
        rho_s0=rho_s0, h_z=h_z, lam=lam, vbar=vbar, gamma=gamma,
        zeta=zeta, xi=xi, width_hgpe=width_hgpe, width_gpe=width_gpe,
    )


def match_gpe_to_hgpe(p: PhysicalParams) -> PhysicalParams:
    """Condensate-side parameter set whose sound speed equals the hard-core one.

    The half-filled hard-core condensate sits at density 1/4, so the matched
    condensate background is rho_g0 = 1/4 and U is chosen so c_g = c_s.
    """
    p.validate(HGPE)
    g = p.t - p.V
    rho_s0 = p.rho0 * (1.0 - p.rho0)
    rho_g0 = 0.25
    U = 2.0 * g * rho_s0 / rho_g0
    return replace(p, U=U, rho0=rho_g0)
