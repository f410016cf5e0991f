"""Command-line front end: ``hermitian-ep simulate|sweep|portrait|reduce|diagnose``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import output
from .config import RunConfig, SweepSpec, load_config
from .model import ConfigError, build_generator, initial_state, return_time
from .propagation import Trajectory, diagonalize, sample_trajectory
from .ratio import PortraitSpec, fixed_points, generate_portrait
from .reduced import eigensystem, ep_coupling, solve_reduced
from .transition import (
    EnsembleSpec,
    NoTransitionDetected,
    detect_transition,
    revival_diagnostics,
    sweep,
)

log = logging.getLogger("hermitian_ep")

COMMANDS = ("simulate", "sweep", "portrait", "reduce", "diagnose")


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_path: str | None = None
    preset_name: str | None = None
    output_dir: str = "out"
    seed_override: int | None = None
    emit_svg: bool = False
    T: float | None = None
    n_states: int | None = None
    omega_grid: str | None = None
    model: str | None = None
    full: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if (self.config_path is None) == (self.preset_name is None):
            raise ConfigError("exactly one of --config / --preset is required")


def parse_omega_grid(text: str) -> dict:
    """``start:stop:steps[:log]`` -> sweep fields."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise ConfigError(f"--omega-grid: expected start:stop:steps[:log], got {text!r}")
    try:
        return {"start": float(parts[0]), "stop": float(parts[1]), "steps": int(parts[2]), "log": len(parts) == 4}
    except ValueError:
        raise ConfigError(f"--omega-grid: cannot parse {text!r}") from None


def _apply_overrides(cfg: RunConfig, m: RunManifest) -> RunConfig:
    if m.seed_override is not None or m.n_states is not None:
        base = cfg.ensemble or EnsembleSpec(300, 0)
        cfg.ensemble = EnsembleSpec(
            m.n_states if m.n_states is not None else base.n_states,
            m.seed_override if m.seed_override is not None else base.seed,
        )
    if m.T is not None or m.omega_grid is not None or m.model is not None:
        fields = {}
        if m.omega_grid is not None:
            fields.update(parse_omega_grid(m.omega_grid))
        if m.model is not None:
            fields["model"] = m.model
        if cfg.sweep is None:
            if m.T is None:
                raise ConfigError("sweep: no sweep section; pass --T")
            cfg.sweep = SweepSpec(T=m.T, **fields)
        else:
            if m.T is not None:
                fields["T"] = m.T
            cfg.sweep = replace(cfg.sweep, **fields)
    return cfg


def _meta(cfg: RunConfig, command: str) -> dict:
    meta = cfg.to_dict()
    meta["command"] = command
    meta["ep_coupling"] = cfg.ep_coupling()
    return meta


def _hermitian_trajectory(cfg: RunConfig, keep_reservoirs=True) -> Trajectory:
    s = cfg.system
    prop = diagonalize(build_generator(s))
    v0 = initial_state(s, *cfg.initial)
    return sample_trajectory(prop, v0, s.t_max, s.dt_sample, keep_reservoirs, s.digest())


def _return_times(cfg):
    return [return_time(r) for r in (cfg.system.reservoir1, cfg.system.reservoir2) if r.n_modes > 0]


def cmd_simulate(cfg, m, out):
    traj = _hermitian_trajectory(cfg, keep_reservoirs=m.full)
    meta = _meta(cfg, "simulate")
    output.write_trajectory_csv(out / "trajectory.csv", traj, meta, full=m.full)
    a1, a2 = solve_reduced(cfg.reduced_model(), *cfg.initial, traj.times)
    overlay = Trajectory(traj.times, np.column_stack([a1, a2]), traj.config_hash)
    output.write_trajectory_csv(out / "reduced.csv", overlay, meta, model="reduced")
    if m.emit_svg:
        output.plot_trajectory_svg(out / "trajectory.svg", traj, overlay, _return_times(cfg))
    return 0


def cmd_sweep(cfg, m, out):
    if cfg.sweep is None:
        raise ConfigError("sweep: configuration has no sweep section (use --T / --omega-grid)")
    ensemble = cfg.ensemble or EnsembleSpec(300, 0)
    cfg.ensemble = ensemble
    sp = cfg.sweep
    ep = cfg.ep_coupling()
    grid = sp.grid(ep)
    results = sweep(cfg.system, grid, ensemble, sp.T, sp.pole_eps, sp.model, sp.dt, cfg.reduced)
    output.write_sweep_csv(out / "sweep.csv", results, _meta(cfg, "sweep"))
    if m.emit_svg:
        output.plot_sweep_svg(out / "sweep.svg", results, ep)
    failed = [r for r in results if not r.ok]
    try:
        est = detect_transition(results)
        print(
            f"transition at coupling {est.coupling:.6g} +/- {est.uncertainty:.2g} "
            f"({est.coupling / ep:.3f} x EP coupling {ep:.6g})" if ep > 0 else
            f"transition at coupling {est.coupling:.6g} +/- {est.uncertainty:.2g}"
        )
    except NoTransitionDetected as exc:
        print(str(exc))
    if failed:
        print(f"{len(failed)} of {len(results)} sweep points failed", file=sys.stderr)
        for r in failed:
            print(f"  coupling={r.coupling!r}: {r.error}", file=sys.stderr)
        return 1
    return 0


def cmd_portrait(cfg, m, out):
    params = cfg.reduced_model()
    spec = cfg.portrait or PortraitSpec()
    portrait = generate_portrait(spec, params)
    meta = _meta(cfg, "portrait")
    output.write_portrait_csv(out / "portrait.csv", portrait, meta)
    for i, tr in enumerate(portrait.trajectories):
        output.write_ratio_trajectory_csv(out / f"portrait_traj_{i}.csv", tr, meta)
    if m.emit_svg:
        output.plot_portrait_svg(out / "portrait.svg", portrait)
    return 0


def _c(z):
    return [z.real, z.imag]


def cmd_reduce(cfg, m, out):
    params = cfg.reduced_model()
    eig = eigensystem(params)
    fps = fixed_points(params)
    report = {
        "omega0": params.omega0,
        "coupling": params.coupling,
        "gamma1": params.gamma1,
        "gamma2": params.gamma2,
        "ep_coupling": ep_coupling(params),
        "lambda1": _c(eig.lambda1),
        "lambda2": _c(eig.lambda2),
        "h1": [_c(complex(x)) for x in eig.h1],
        "h2": [_c(complex(x)) for x in eig.h2],
        "coalesced": eig.coalesced,
        "regime": fps.regime,
        "fixed_points": [
            {"re": fp.point.re, "im": fp.point.im, "kind": fp.kind} for fp in fps.points
        ],
        "return_times": _return_times(cfg),
    }
    path = out / "reduce.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def cmd_diagnose(cfg, m, out):
    traj = _hermitian_trajectory(cfg, keep_reservoirs=False)
    d = cfg.diagnostics
    report = revival_diagnostics(traj, d.threshold, d.smooth_window)
    meta = _meta(cfg, "diagnose")
    output.write_diagnostics_csv(out / "diagnostics.csv", report, meta)
    output.write_trajectory_csv(out / "trajectory.csv", traj, meta)
    if m.emit_svg:
        output.plot_trajectory_svg(out / "trajectory.svg", traj, None, _return_times(cfg))
    print(
        f"first revivals: oscillator 1 at {report.first_revival(1)}, oscillator 2 at {report.first_revival(2)}; "
        f"sync score {report.sync_score:.4f}"
    )
    return 0


_DISPATCH = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "portrait": cmd_portrait,
    "reduce": cmd_reduce,
    "diagnose": cmd_diagnose,
}


def run(manifest: RunManifest) -> int:
    """Execute one command; returns the process exit status."""
    try:
        cfg = load_config(manifest.config_path, manifest.preset_name)
        cfg = _apply_overrides(cfg, manifest)
        return _DISPATCH[manifest.command](cfg, manifest, Path(manifest.output_dir))
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermitian-ep", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="named preset (fig2, fig3a-c, fig4, fig5a, fig5b, fig6a, fig6b, fig7, fig8)")
    src.add_argument("--config", help="YAML configuration file")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--seed", type=int, help="override the ensemble seed")
    p.add_argument("--svg", action="store_true", help="also write SVG plots")
    p.add_argument("--T", type=float, help="observation time for the order parameter")
    p.add_argument("--n-states", type=int, help="ensemble size")
    p.add_argument("--omega-grid", help="start:stop:steps[:log] in the units of the sweep section")
    p.add_argument("--model", choices=("hermitian", "reduced"), help="model used by sweep")
    p.add_argument("--full", action="store_true", help="simulate: include reservoir amplitudes")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        manifest = RunManifest(
            command=args.command,
            config_path=args.config,
            preset_name=args.preset,
            output_dir=args.out,
            seed_override=args.seed,
            emit_svg=args.svg,
            T=args.T,
            n_states=args.n_states,
            omega_grid=args.omega_grid,
            model=args.model,
            full=args.full,
        )
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
