"""Shared fixtures: the expensive PDE runs are session-scoped so the
module tests and the acceptance suite reuse one set of trajectories."""
import math

import numpy as np
import pytest

from solitonlab import analytic, measure, pde
from solitonlab.params import (GPE, HGPE, PhysicalParams, derive_groups,
                               match_gpe_to_hgpe)

VBAR = 0.5


@pytest.fixture(scope="session")
def hgpe_params():
    return PhysicalParams()  # t=1, V=1/3, half filling


@pytest.fixture(scope="session")
def gpe_params(hgpe_params):
    return match_gpe_to_hgpe(hgpe_params)


def _run_hgpe(params, lead_branch):
    grid = pde.Grid1D(n=384, length=24.0)
    state = pde.hgpe_soliton_pair(params, grid, VBAR, x1=6.0, x2=18.0,
                                  lead_branch=lead_branch)
    dt = 7e-4
    steps = int(round(22.0 / dt))
    final, snaps = pde.evolve_hgpe(state, dt, steps,
                                   record_every=steps // 22)
    return state, final, snaps


@pytest.fixture(scope="session")
def hgpe_run(hgpe_params):
    """Dark soliton leading at x1, antidark partner at x2, vbar=0.5."""
    return _run_hgpe(hgpe_params, analytic.DARK)


@pytest.fixture(scope="session")
def hgpe_run_mirror(hgpe_params):
    """The particle-hole mirror: antidark leading at x1."""
    return _run_hgpe(hgpe_params, analytic.ANTIDARK)


@pytest.fixture(scope="session")
def gpe_run(gpe_params):
    """Counter-propagating dark-soliton pair, vbar=0.5, L > 40 xi."""
    grid = pde.Grid1D(n=2048, length=96.0)
    state = pde.gpe_soliton_pair(gpe_params, grid, VBAR)
    dt = 0.004
    steps = int(round(44.0 / dt))
    final, snaps = pde.evolve_gpe(state, dt, steps,
                                  record_every=steps // 22)
    return state, final, [state, *snaps]


@pytest.fixture(scope="session")
def sound_hgpe(hgpe_params):
    return measure.measure_sound_speed(HGPE, hgpe_params)


@pytest.fixture(scope="session")
def sound_gpe(gpe_params):
    return measure.measure_sound_speed(GPE, gpe_params)
