"""Extraction of soliton observables from profiles and snapshots.

sech^2 least-squares fitting (damped Gauss-Newton), dip tracking and
speed estimation, sound-speed probing on the uniform background, and
the analytic contrast sweep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic, pde
from .params import HGPE, GPE, PhysicalParams, derive_groups

# half-depth point of sech^2: sech^2(u) = 1/2 at u = arccosh(sqrt(2))
_HALF_DEPTH_U = math.acosh(math.sqrt(2.0))


class FitError(ValueError):
    """Degenerate fit input (e.g. flat profile with no extremum)."""


class MeasurementError(RuntimeError):
    """A measurement precondition failed (e.g. pulse amplitude too large)."""


@dataclass
class FitResult:
    amplitude: float
    width: float
    center: float
    background: float
    residual_sup: float
    converged: bool
    orientation: int  # -1 dip, +1 bump
    iterations: int = 0

    def evaluate(self, x):
        s = 1.0 / np.cosh((np.asarray(x) - self.center) / self.width)
        return self.background + self.orientation * self.amplitude * s * s


def _initial_guess(x, y):
    n = len(x)
    edge = max(1, n // 10)
    background = 0.5 * (np.mean(y[:edge]) + np.mean(y[-edge:]))
    dev = y - background
    j = int(np.argmax(np.abs(dev)))
    amp = abs(dev[j])
    if amp < 1e-12 * max(1.0, abs(background)):
        raise FitError("no extremum: profile is flat")
    orientation = -1 if dev[j] < 0 else 1
    center = x[j]
    # width from the half-depth crossings around the extremum
    half = amp / 2.0
    above = np.abs(dev) >= half
    left = j
    while left > 0 and above[left - 1]:
        left -= 1
    right = j
    while right < n - 1 and above[right + 1]:
        right += 1
    w = max(x[right] - x[left], 2.0 * (x[1] - x[0]))
    width = 0.5 * w / _HALF_DEPTH_U
    return np.array([amp, width, center, background]), orientation


def fit_sech2(x, y, guess=None, max_iter: int = 200,
              step_tol: float = 1e-12) -> FitResult:
    """Damped Gauss-Newton fit of B + s*A*sech^2((x - x0)/G).

    The dip/bump orientation s is detected from the data.  On
    non-convergence the best parameters so far are returned with
    converged=False.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if guess is None:
        theta, orientation = _initial_guess(x, y)
    else:
        theta = np.asarray(guess[:4], dtype=float).copy()
        orientation = int(guess[4]) if len(guess) > 4 else -1

    def model_and_jac(th):
        amp, width, center, background = th
        u = (x - center) / width
        s = 1.0 / np.cosh(u)
        s2 = s * s
        t = np.tanh(u)
        m = background + orientation * amp * s2
        jac = np.empty((len(x), 4))
        jac[:, 0] = orientation * s2
        jac[:, 1] = orientation * amp * 2.0 * s2 * t * u / width
        jac[:, 2] = orientation * amp * 2.0 * s2 * t / width
        jac[:, 3] = 1.0
        return m, jac

    damping = 1e-3
    m, jac = model_and_jac(theta)
    resid = m - y
    cost = float(resid @ resid)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        jtj = jac.T @ jac
        jtr = jac.T @ resid
        stepped = False
        for _ in range(30):
            try:
                delta = np.linalg.solve(jtj + damping * np.diag(np.diag(jtj)), -jtr)
            except np.linalg.LinAlgError:
                damping *= 10.0
                continue
            trial = theta + delta
            trial[0] = abs(trial[0])
            trial[1] = abs(trial[1])
            m_t, jac_t = model_and_jac(trial)
            resid_t = m_t - y
            cost_t = float(resid_t @ resid_t)
            if cost_t <= cost:
                theta, m, jac, resid, cost = trial, m_t, jac_t, resid_t, cost_t
                damping = max(damping / 3.0, 1e-14)
                stepped = True
                break
            damping *= 10.0
        if not stepped:
            break
        if float(np.max(np.abs(delta))) < step_tol * (1.0 + float(np.max(np.abs(theta)))):
            converged = True
            break
    return FitResult(amplitude=float(theta[0]), width=float(theta[1]),
                     center=float(theta[2]), background=float(theta[3]),
                     residual_sup=float(np.max(np.abs(resid))),
                     converged=converged, orientation=orientation,
                     iterations=iterations)


@dataclass
class TrackResult:
    speed: float
    r_squared: float
    times: np.ndarray
    centers: np.ndarray
    warning: str | None = None


def track_soliton(snapshots, length: float | None = None,
                  window: float | None = None,
                  x0: float | None = None) -> TrackResult:
    """Speed of a traveling dip from per-snapshot sech^2 fits.

    snapshots: sequence of (time, x, values).  Centers are unwrapped on
    the periodic domain of the given length; with a window, each fit is
    restricted to positions within the window of the previous center
    (seeded by x0, which selects the dip when there are several).
    """
    if len(snapshots) < 5:
        raise ValueError("need at least 5 snapshots")
    times = []
    centers = []
    prev = x0
    for t, x, y in snapshots:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if window is not None and prev is not None and length is not None:
            d = (x - prev + 0.5 * length) % length - 0.5 * length
            mask = np.abs(d) <= window
            order = np.argsort(d[mask])
            fit = fit_sech2(d[mask][order], y[mask][order])
            center = prev + fit.center
        else:
            fit = fit_sech2(x, y)
            center = fit.center
        if length is not None:
            center %= length
        prev = center
        times.append(t)
        centers.append(center)
    times = np.asarray(times)
    centers = np.asarray(centers)
    if length is not None:
        centers = np.unwrap(centers, period=length)
    a = np.vstack([times, np.ones_like(times)]).T
    (speed, intercept), res, *_ = np.linalg.lstsq(a, centers, rcond=None)
    predicted = speed * times + intercept
    ss_tot = float(np.sum((centers - np.mean(centers)) ** 2))
    ss_res = float(np.sum((centers - predicted) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    warning = "non-ballistic motion" if r2 < 0.999 else None
    return TrackResult(speed=float(speed), r_squared=r2, times=times,
                       centers=centers, warning=warning)


# ---------------------------------------------------------------------------
# sound-speed probe

@dataclass
class SoundSpeedResult:
    speed: float
    speed_right: float
    speed_left: float
    asymmetry: float


def _front_position(x, dev, side: str, threshold: float):
    """Outermost half-maximum crossing of the pulse on one side of the box."""
    n = len(x)
    half = n // 2
    idx = np.arange(half, n) if side == "right" else np.arange(0, half)
    scan = idx[::-1] if side == "right" else idx
    for j in scan:
        if dev[j] >= threshold:
            # interpolate toward the outer neighbour
            j2 = j + 1 if side == "right" else j - 1
            d0, d1 = dev[j], dev[j2]
            frac = (d0 - threshold) / (d0 - d1) if d0 != d1 else 0.0
            return float(x[j] + frac * (x[j2] - x[j]))
    return None


def measure_sound_speed(system: str, params: PhysicalParams,
                        eps: float = 1e-3,
                        grid: pde.Grid1D | None = None,
                        sigma: float = 8.0,
                        duration: float | None = None,
                        n_snapshots: int = 24) -> SoundSpeedResult:
    """Launch a small Gaussian density pulse and track its two fronts.

    eps is the pulse amplitude relative to the background density and
    must stay in the linear regime; detected nonlinear steepening (front
    slope growing by more than 5% during propagation) raises
    MeasurementError.
    """
    side = HGPE if system == HGPE else GPE
    params.validate(side)
    if grid is None:
        grid = pde.Grid1D(n=1024, length=192.0)
    groups = derive_groups(params, 0.0, side)
    c_expected = groups.c
    if duration is None:
        duration = 0.55 * grid.length / c_expected / 2.0
    x = grid.x
    x0 = 0.5 * grid.length
    bump = np.exp(-0.5 * ((x - x0) / sigma) ** 2)
    rho_bg = params.rho0
    if system == HGPE:
        state = pde.HgpeState(grid=grid, rho=rho_bg * (1.0 + eps * bump),
                              phi=np.zeros(grid.n), time=0.0, params=params)
        dt = 0.9 * pde.CFL_FACTOR * grid.dx ** 2
        steps = int(math.ceil(duration / dt))
        record = max(1, steps // n_snapshots)
        _, snaps = pde.evolve_hgpe(state, dt, steps, record_every=record)
        devs = [(s.time, s.rho - rho_bg) for s in snaps]
    else:
        state = pde.GpeState(grid=grid,
                             psi=np.sqrt(rho_bg * (1.0 + eps * bump)).astype(complex),
                             time=0.0, params=params)
        dt = 0.01
        steps = int(math.ceil(duration / dt))
        record = max(1, steps // n_snapshots)
        _, snaps = pde.evolve_gpe(state, dt, steps, record_every=record)
        devs = [(s.time, np.abs(s.psi) ** 2 - rho_bg) for s in snaps]

    # fronts are tracked after the two pulses have separated
    start = len(devs) // 3
    t_r, p_r, t_l, p_l = [], [], [], []
    for t, dev in devs[start:]:
        peak_r = float(np.max(dev[grid.n // 2:]))
        peak_l = float(np.max(dev[: grid.n // 2]))
        pr = _front_position(x, dev, "right", 0.5 * peak_r)
        pl = _front_position(x, dev, "left", 0.5 * peak_l)
        if pr is not None:
            t_r.append(t)
            p_r.append(pr)
        if pl is not None:
            t_l.append(t)
            p_l.append(pl)
    if len(t_r) < 4 or len(t_l) < 4:
        raise MeasurementError("too few usable snapshots for front tracking")
    v_r = float(np.polyfit(t_r, p_r, 1)[0])
    v_l = float(np.polyfit(t_l, p_l, 1)[0])

    # nonlinear steepening check.  A linear pulse's front slope decays
    # (dispersion spreads it); amplitude-driven steepening makes it grow.
    # Smoothing on a scale between the dispersive ringing and the pulse
    # width keeps short-wavelength ripples out of the slope.
    kw = max(3, int(round(0.5 * sigma / grid.dx)))
    kernel = np.exp(-0.5 * (np.arange(-2 * kw, 2 * kw + 1) / kw) ** 2)
    kernel /= kernel.sum()
    half_n = grid.n // 2
    slopes = []
    for t, dev in devs[start:]:
        smooth = np.convolve(dev, kernel, mode="same")
        slopes.append(float(np.max(np.abs(np.gradient(smooth[half_n:], grid.dx)))))
    asym = slopes[-1] / slopes[0] - 1.0
    if asym > 0.05:
        raise MeasurementError(
            f"eps too large: nonlinear steepening (front slope grew {asym:.1%})")
    speed = 0.5 * (abs(v_r) + abs(v_l))
    return SoundSpeedResult(speed=speed, speed_right=v_r, speed_left=v_l,
                            asymmetry=asym)


# ---------------------------------------------------------------------------
# contrast sweep

@dataclass
class SweepRow:
    vbar: float
    gamma: float
    depth_analytic: float
    depth_fit: float
    width_analytic: float
    width_fit: float


def contrast_sweep(vbars, params: PhysicalParams) -> list[SweepRow]:
    """Dip depth and width of the condensate-density soliton vs speed.

    Analytic columns are exact (depth gamma^2/4, width (2*gamma*zeta)^-1
    at half filling); fit columns come from a sech^2 fit of the sampled
    analytic profile.
    """
    groups0 = derive_groups(params, 0.0, HGPE)
    if groups0.zeta is None:
        raise ValueError("zeta undefined for these parameters")
    rows = []
    for vbar in vbars:
        groups = derive_groups(params, vbar * groups0.c, HGPE)
        gamma = groups.gamma
        depth = 0.25 * gamma * gamma
        width = groups.width_hgpe
        z = np.linspace(-12.0 * width, 12.0 * width, 2001)
        rho_s = analytic.hgpe_condensate(z, vbar, groups.zeta)
        fit = fit_sech2(z, rho_s)
        rows.append(SweepRow(vbar=vbar, gamma=gamma, depth_analytic=depth,
                             depth_fit=fit.amplitude, width_analytic=width,
                             width_fit=fit.width))
    return rows
