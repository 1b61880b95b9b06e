"""Command-line front end: configuration, subcommands, and run manifests.

Every run reads a flat key=value config (flags override), executes one
subcommand, and writes its artifacts plus a JSON manifest into the
output directory.  Output is deterministic: identical configs produce
bit-identical CSVs and manifests up to the timestamp field.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__, analytic, measure, pde, spinmap
from . import twode
from .params import (GPE, HGPE, ParameterError, PhysicalParams, derive_groups,
                     match_gpe_to_hgpe)

CONFIG_KEYS = ("t", "V", "U", "rho0", "vbar", "grid.n", "grid.length",
               "dt", "steps", "output.dir")

EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_NUMERICS = 4


class ConfigError(ValueError):
    """Bad or missing configuration key."""


def _fmt(v) -> str:
    return format(float(v), ".17g")


def load_config(path: str | None) -> dict:
    cfg: dict = {}
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        cfg[key] = value
    return cfg


def _merge_flags(cfg: dict, args: argparse.Namespace) -> dict:
    """Command-line flags override config-file values."""
    flag_map = {"t": "t", "V": "V", "U": "U", "rho0": "rho0", "vbar": "vbar",
                "grid_n": "grid.n", "grid_length": "grid.length",
                "dt": "dt", "steps": "steps", "out": "output.dir"}
    merged = dict(cfg)
    for attr, key in flag_map.items():
        val = getattr(args, attr, None)
        if val is not None:
            merged[key] = str(val)
    env_out = os.environ.get("SOLITONLAB_OUT")
    if env_out:
        merged["output.dir"] = env_out
    return merged


def _get(cfg: dict, key: str, conv=float, default=None):
    if key not in cfg:
        if default is not None:
            return default
        raise ConfigError(f"missing key {key!r}")
    try:
        return conv(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {cfg[key]!r}") from exc


def _params_from(cfg: dict) -> PhysicalParams:
    return PhysicalParams(t=_get(cfg, "t", default=1.0),
                          V=_get(cfg, "V", default=1.0 / 3.0),
                          U=_get(cfg, "U", default=0.0),
                          rho0=_get(cfg, "rho0", default=0.5))


def _grid_from(cfg: dict) -> pde.Grid1D:
    return pde.Grid1D(n=_get(cfg, "grid.n", int, 1024),
                      length=_get(cfg, "grid.length", float, 64.0))


def _outdir(cfg: dict) -> str:
    out = cfg.get("output.dir", "out")
    os.makedirs(out, exist_ok=True)
    return out


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _groups_dict(groups) -> dict:
    return {k: v for k, v in asdict(groups).items()}


def write_manifest(outdir: str, command: str, cfg: dict,
                   params: PhysicalParams, groups=None, scheme: str | None = None,
                   drift: dict | None = None, artifacts: list[str] | None = None,
                   extra: dict | None = None) -> str:
    # the hash covers the physics/numerics keys only; where the output
    # lands must not change what counts as "the same run"
    payload = {k: v for k, v in sorted(cfg.items()) if k != "output.dir"}
    manifest = {
        "command": command,
        "version": __version__,
        "params": asdict(params),
        "groups": _groups_dict(groups) if groups is not None else None,
        "scheme": scheme,
        "dt": float(cfg["dt"]) if "dt" in cfg else None,
        "grid": ({"n": int(cfg["grid.n"]), "length": float(cfg["grid.length"])}
                 if "grid.n" in cfg and "grid.length" in cfg else None),
        "kappa": analytic.KAPPA,
        "drift": drift,
        # relative to the manifest's own directory, so identical configs
        # produce identical manifests wherever the run lands
        "artifacts": [os.path.relpath(a, outdir) for a in (artifacts or [])],
        "config_sha256": hashlib.sha256(
            json.dumps(payload, sort_keys=True).encode()).hexdigest(),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        manifest.update(extra)
    path = os.path.join(outdir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


# ---------------------------------------------------------------------------
# subcommands

def cmd_params(cfg: dict, args) -> int:
    p = _params_from(cfg)
    side = HGPE if args.system == HGPE else GPE
    groups0 = derive_groups(p, 0.0, side)
    vbar = _get(cfg, "vbar", default=0.0)
    groups = derive_groups(p, vbar * groups0.c, side)
    for key, val in _groups_dict(groups).items():
        if isinstance(val, float):
            print(f"{key} = {_fmt(val)}")
        else:
            print(f"{key} = {val}")
    outdir = _outdir(cfg)
    write_manifest(outdir, "params", cfg, p, groups)
    return 0


def cmd_profile(cfg: dict, args) -> int:
    p = _params_from(cfg)
    vbar = _get(cfg, "vbar", default=0.5)
    grid = _grid_from(cfg)
    groups0 = derive_groups(p, 0.0, HGPE)
    groups = derive_groups(p, vbar * groups0.c, HGPE)
    if groups.zeta is None:
        raise ParameterError("2*lam^2 >= 1: no lattice soliton width")
    z = np.linspace(-0.5 * grid.length, 0.5 * grid.length, grid.n,
                    endpoint=False)
    rho_dark = analytic.hgpe_density(z, vbar, groups.zeta, analytic.DARK)
    rho_anti = analytic.hgpe_density(z, vbar, groups.zeta, analytic.ANTIDARK)
    rho_s = analytic.hgpe_condensate(z, vbar, groups.zeta)
    phi, warning = analytic.hgpe_phase(z, vbar, groups.zeta, groups.c,
                                       analytic.DARK)
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    outdir = _outdir(cfg)
    path = os.path.join(outdir, "profile.csv")
    write_csv(path, ["z", "rho_dark", "rho_antidark", "rho_s", "phi_dark"],
              zip(z, rho_dark, rho_anti, rho_s, phi))
    write_manifest(outdir, "profile", cfg, p, groups, artifacts=[path])
    print(f"wrote {path}")
    return 0


def cmd_residual(cfg: dict, args) -> int:
    p = _params_from(cfg)
    vbar = _get(cfg, "vbar", default=0.5)
    forms, tags, matrix = twode.consistency_matrix(vbar)
    outdir = _outdir(cfg)
    path = os.path.join(outdir, "residuals.json")
    with open(path, "w") as fh:
        json.dump({"vbar": vbar, "forms": forms, "odes": tags,
                   "residual_sup": [[float(v) for v in row] for row in matrix]},
                  fh, indent=2)
        fh.write("\n")
    for name, row in zip(forms, matrix):
        best = tags[int(np.argmin(row))]
        print(f"{name}: best ode {best}, residual {row.min():.3e}")
    write_manifest(outdir, "residual", cfg, p, artifacts=[path])
    return 0


def cmd_evolve(cfg: dict, args) -> int:
    p = _params_from(cfg)
    if "dt" not in cfg:
        raise ConfigError("missing key 'dt'")
    dt = _get(cfg, "dt")
    steps = _get(cfg, "steps", int, 1000)
    vbar = _get(cfg, "vbar", default=0.5)
    grid = _grid_from(cfg)
    outdir = _outdir(cfg)
    record = max(1, steps // args.snapshots) if args.snapshots else 0
    if args.system == GPE:
        state = pde.gpe_soliton_pair(p, grid, vbar)
        obs0 = pde.observables(state)
        final, snaps = pde.evolve_gpe(state, dt, steps, record_every=record)
        obs1 = pde.observables(final)
        scheme = "strang-split-spectral"
        rows = zip(grid.x, final.psi.real, final.psi.imag, obs1["rho"])
        header = ["x", "psi_re", "psi_im", "rho"]
    else:
        state = pde.hgpe_soliton_pair(p, grid, vbar)
        obs0 = pde.observables(state)
        final, snaps = pde.evolve_hgpe(state, dt, steps, record_every=record)
        obs1 = pde.observables(final)
        scheme = "rk4-centered-4th"
        rows = zip(grid.x, final.rho, final.phi, obs1["rho_s"])
        header = ["x", "rho", "phi", "rho_s"]
    path = os.path.join(outdir, "final.csv")
    write_csv(path, header, rows)
    artifacts = [path]
    for i, snap in enumerate(snaps):
        spath = os.path.join(outdir, f"snap_{i:04d}.csv")
        if args.system == GPE:
            write_csv(spath, ["x", "psi_re", "psi_im"],
                      zip(grid.x, snap.psi.real, snap.psi.imag))
        else:
            write_csv(spath, ["x", "rho", "phi"],
                      zip(grid.x, snap.rho, snap.phi))
        artifacts.append(spath)
    drift = {"n_tot": obs1["n_tot"] - obs0["n_tot"],
             "energy": obs1["energy"] - obs0["energy"]}
    groups = derive_groups(p, 0.0, args.system)
    write_manifest(outdir, "evolve", cfg, p, groups, scheme=scheme,
                   drift=drift, artifacts=artifacts)
    print(f"evolved {steps} steps to t={final.time:g}; "
          f"N drift {drift['n_tot']:.3e}, E drift {drift['energy']:.3e}")
    print(f"wrote {path}")
    return 0


def cmd_fit(cfg: dict, args) -> int:
    with open(args.input, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader])
    ycol = header.index(args.column) if args.column in header else 1
    fit = measure.fit_sech2(data[:, 0], data[:, ycol])
    p = _params_from(cfg)
    outdir = _outdir(cfg)
    path = os.path.join(outdir, "fit.json")
    with open(path, "w") as fh:
        json.dump(asdict(fit), fh, indent=2)
        fh.write("\n")
    print(f"amplitude = {_fmt(fit.amplitude)}")
    print(f"width     = {_fmt(fit.width)}")
    print(f"center    = {_fmt(fit.center)}")
    print(f"background= {_fmt(fit.background)}")
    print(f"converged = {fit.converged}")
    write_manifest(outdir, "fit", cfg, p, artifacts=[path])
    return 0


def cmd_sweep(cfg: dict, args) -> int:
    p = _params_from(cfg)
    vbars = [float(s) for s in args.vbars.split(",")]
    rows = measure.contrast_sweep(vbars, p)
    outdir = _outdir(cfg)
    path = os.path.join(outdir, "sweep.csv")
    write_csv(path, ["vbar", "gamma", "depth_analytic", "depth_fit",
                     "width_analytic", "width_fit"],
              ((r.vbar, r.gamma, r.depth_analytic, r.depth_fit,
                r.width_analytic, r.width_fit) for r in rows))
    groups = derive_groups(p, 0.0, HGPE)
    write_manifest(outdir, "sweep", cfg, p, groups, artifacts=[path])
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def cmd_sound(cfg: dict, args) -> int:
    p = _params_from(cfg)
    if args.system == GPE and "U" not in cfg:
        p = match_gpe_to_hgpe(p)
    result = measure.measure_sound_speed(args.system, p, eps=args.eps)
    groups = derive_groups(p, 0.0, args.system)
    outdir = _outdir(cfg)
    path = os.path.join(outdir, "sound.json")
    with open(path, "w") as fh:
        json.dump({"system": args.system, "speed": result.speed,
                   "speed_right": result.speed_right,
                   "speed_left": result.speed_left,
                   "steepening": result.asymmetry,
                   "expected": groups.c}, fh, indent=2)
        fh.write("\n")
    print(f"measured c = {_fmt(result.speed)} (expected {_fmt(groups.c)})")
    write_manifest(outdir, "sound", cfg, p, groups, artifacts=[path])
    return 0


def cmd_spinmap(cfg: dict, args) -> int:
    with open(args.input, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader])
    try:
        xi, ri, pi = (header.index(c) for c in ("x", "rho", "phi"))
    except ValueError as exc:
        raise ConfigError(f"snapshot CSV needs columns x, rho, phi: {exc}")
    spins = spinmap.to_spins(data[:, ri], data[:, pi])
    mperp2 = spinmap.inplane_mag_sq(spins)
    p = _params_from(cfg)
    outdir = _outdir(cfg)
    path = os.path.join(outdir, "spins.csv")
    write_csv(path, ["x", "sx", "sy", "sz", "mperp2"],
              zip(data[:, xi], spins.sx, spins.sy, spins.sz, mperp2))
    chain = spinmap.spin_chain_params(p)
    for key, val in chain.items():
        print(f"{key} = {_fmt(val)}")
    write_manifest(outdir, "spinmap", cfg, p, artifacts=[path],
                   extra={"chain": chain})
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solitonlab",
        description="dark/antidark soliton laboratory: condensate, "
                    "hard-core-boson, and spin-chain incarnations")
    parser.add_argument("--config", help="flat key=value config file")
    for flag in ("t", "V", "U", "rho0", "vbar", "dt"):
        parser.add_argument(f"--{flag}", type=float)
    parser.add_argument("--grid-n", type=int)
    parser.add_argument("--grid-length", type=float)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--out", help="output directory (env SOLITONLAB_OUT "
                                      "overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params", help="print derived groups")
    sp.add_argument("--system", choices=(HGPE, GPE), default=HGPE)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("profile", help="emit analytic soliton profiles")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("residual", help="closed-form vs ODE residual matrix")
    sp.set_defaults(func=cmd_residual)

    sp = sub.add_parser("evolve", help="integrate a soliton pair in time")
    sp.add_argument("--system", choices=(HGPE, GPE), default=HGPE)
    sp.add_argument("--snapshots", type=int, default=0,
                    help="number of intermediate snapshots to write")
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("fit", help="sech^2 fit of a profile CSV")
    sp.add_argument("input")
    sp.add_argument("--column", default="", help="y column name (default: 2nd)")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("sweep", help="dip depth/width vs speed table")
    sp.add_argument("--vbars",
                    default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.95")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("sound", help="measure the sound speed")
    sp.add_argument("--system", choices=(HGPE, GPE), default=HGPE)
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.set_defaults(func=cmd_sound)

    sp = sub.add_parser("spinmap", help="spin fields from a snapshot CSV")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_spinmap)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_flags(load_config(args.config), args)
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except pde.NumericalError as exc:
        step = f" at step {exc.step}" if exc.step is not None else ""
        print(f"numerical error{step}: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
