"""Command-line front end: batch runs, spectrum export, optimization.

All outputs are plain delimited text with '#' metadata headers.  A run
writes a manifest that can itself be passed back as --config to
reproduce the run byte for byte.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, Workspace, data_dir, load_config, workspace_from_file
from .constants import hz_to_rads, rads_to_hz
from .dynamics import PopulationTrajectory
from .molecule import mean_j, mean_v
from .rates import check_regime
from .scheduler import (CoolingSchedule, NothingToCool, evolutionary_optimize,
                        greedy_optimize, j_decrease_rate, load_schedule,
                        parse_transition_label, run as run_schedule, top_down)
from .spectrum import export_spectrum, fold

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGIME = 3


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cavraman",
                                description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="run configuration file")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="override RNG seed")
    common.add_argument("--quiet", action="store_true")

    pr = sub.add_parser("run", parents=[common], help="simulate a cooling schedule")
    pr.add_argument("--schedule", default=None,
                    help="topdown | greedy | evolutionary | schedule file")
    pr.add_argument("--dry-run", action="store_true", help="write manifest only")
    pr.add_argument("--allow-regime-fail", action="store_true")
    pr.add_argument("--snapshots-per-step", type=int, default=4)
    pr.set_defaults(func=cmd_run)

    ps = sub.add_parser("spectrum", parents=[common],
                        help="export the folded Raman spectrum")
    ps.set_defaults(func=cmd_spectrum)

    po = sub.add_parser("optimize", parents=[common],
                        help="search for a cooling schedule")
    po.add_argument("--method", choices=("greedy", "evolutionary"), default="greedy")
    po.add_argument("--horizon", type=int, default=12)
    po.add_argument("--generations", type=int, default=20)
    po.add_argument("--population-size", type=int, default=12)
    po.set_defaults(func=cmd_optimize)

    pt = sub.add_parser("rates", parents=[common], help="dump the rate table")
    pt.add_argument("--offset-hz", type=float, default=0.0)
    pt.set_defaults(func=cmd_rates)

    pv = sub.add_parser("serve", help="run the interactive control service")
    pv.add_argument("--host", default="127.0.0.1")
    pv.add_argument("--port", type=int, default=8077)
    pv.add_argument("--frontend-dir", default="frontend",
                    help="static UI directory to serve at / (if present)")
    pv.set_defaults(func=cmd_serve)
    return p


def _prepare(args) -> Workspace:
    ws = workspace_from_file(args.config)
    if args.seed is not None:
        ws.config.seed = args.seed
    return ws


def _resolve_schedule(ws: Workspace, choice: str, p0: np.ndarray) -> CoolingSchedule:
    cfg = ws.config
    dur = cfg.step_duration_ms * 1e-3
    if choice == "topdown":
        return top_down(ws.basis, p0, threshold=cfg.threshold, step_duration=dur)
    if choice == "greedy":
        return greedy_optimize(ws.model, p0, horizon_steps=12, step_duration=dur)
    if choice == "evolutionary":
        return evolutionary_optimize(ws.model, p0, generations=10,
                                     population_size=8, seed=cfg.seed,
                                     step_duration=dur)
    path = Path(choice)
    if not path.exists():
        candidate = data_dir() / "schedules" / choice
        if candidate.exists():
            path = candidate
        else:
            raise ConfigError(f"schedule {choice!r} not found")
    return load_schedule(str(path))


def _write_manifest(ws: Workspace, out: Path, schedule_text: str):
    manifest = [
        "# run manifest: pass this file back as --config to reproduce the run",
        f"# cavraman version: {__version__}",
        f"# inputs hash: {ws.config.content_hash()}",
        ws.config.raw_text.rstrip(),
        "",
        "[manifest]",
        f"seed = {ws.config.seed}",
        "",
    ]
    (out / "manifest.cfg").write_text("\n".join(manifest))
    (out / "schedule.seq").write_text(schedule_text)


def _fraction_ground(ws: Workspace, p: np.ndarray) -> float:
    return float(sum(
        pp for s, pp in zip(ws.basis.states, p) if s.v == 0 and s.j <= 1
    ))


def cmd_run(args) -> int:
    ws = _prepare(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    p0 = ws.initial_populations()
    choice = args.schedule or ws.config.schedule
    try:
        schedule = _resolve_schedule(ws, choice, p0)
    except NothingToCool as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _write_manifest(ws, out, schedule.to_text())
    if args.dry_run:
        if not args.quiet:
            print(f"manifest written to {out}/manifest.cfg")
        return EXIT_OK

    driven = [parse_transition_label(s.target, ws.basis)
              for s in schedule.steps if s.is_transition]
    report = check_regime(ws.model, driven, threshold=ws.config.regime_threshold)
    (out / "regime.txt").write_text(report.format_text())
    if not report.all_pass and not args.allow_regime_fail:
        print("regime check failed (see regime.txt); "
              "--allow-regime-fail overrides", file=sys.stderr)
        return EXIT_REGIME

    if ws.config.momentum_model:
        from .constants import KB_J_PER_K
        from .dynamics import run_translational_stage

        times, energies, _ = run_translational_stage(
            ws.model, ws.config.translational_temperature_k,
            ws.config.translational_duration_ms * 1e-3,
            offset_kappa=ws.config.translational_offset_kappa,
            populations=p0)
        rows = ["# translational pre-cooling stage", "# t_s\tEkin_J\tEkin_over_kB_K"]
        rows += [f"{t:.9e}\t{e:.9e}\t{e / KB_J_PER_K:.9e}"
                 for t, e in zip(times, energies)]
        (out / "translational.tsv").write_text("\n".join(rows) + "\n")

    traj = run_schedule(schedule, ws.model, p0,
                        snapshots_per_step=args.snapshots_per_step)
    (out / "trajectory.tsv").write_text(traj.export())
    (out / "spectrum.tsv").write_text(export_spectrum(
        fold(ws.basis, ws.cavity, ws.laser)))
    if not args.quiet:
        frac = _fraction_ground(ws, traj.final())
        print(f"final ladder-ground fraction (v=0, J<=1): {frac:.4f}")
        print(f"<J> {traj.mean_j_series()[0]:.3f} -> {traj.mean_j_series()[-1]:.3f}"
              f" over {traj.times[-1]:.3f} s")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    ws = _prepare(args)
    if len(ws.basis) == 0:
        return EXIT_CONFIG
    spec = fold(ws.basis, ws.cavity, ws.laser)
    text = export_spectrum(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "spectrum.tsv").write_text(text)
    if not args.quiet:
        n_anti = len(spec.anti_stokes())
        print(f"{n_anti} anti-Stokes lines, {len(spec.lines)} lines total; "
              f"written to {out}/spectrum.tsv")
    return EXIT_OK


def cmd_optimize(args) -> int:
    ws = _prepare(args)
    if args.method == "greedy" and args.horizon < 1:
        print("config error: horizon must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    p0 = ws.initial_populations()
    dur = ws.config.step_duration_ms * 1e-3
    if args.method == "greedy":
        schedule = greedy_optimize(ws.model, p0, horizon_steps=args.horizon,
                                   step_duration=dur)
    else:
        schedule = evolutionary_optimize(
            ws.model, p0, generations=args.generations,
            population_size=args.population_size, seed=ws.config.seed,
            step_duration=dur, horizon_steps=args.horizon)
    traj = run_schedule(schedule, ws.model, p0)
    _write_manifest(ws, out, schedule.to_text())
    (out / "trajectory.tsv").write_text(traj.export())
    rate = j_decrease_rate(traj)
    if not args.quiet:
        print(f"best schedule written to {out}/schedule.seq")
        print(f"<J> decrease rate: {rate:.3f} Hz")
    return EXIT_OK


def cmd_rates(args) -> int:
    ws = _prepare(args)
    table = ws.model.build(offset=hz_to_rads(args.offset_hz))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["# rate table (1/s); rows = from, columns = to"]
    lines.append(f"# laser offset_hz: {args.offset_hz:.9e}")
    labels = [s.label for s in ws.basis.states]
    lines.append("# kind\tfrom\\to\t" + "\t".join(labels))
    for name, arr in (("spont", table.gamma_spont),
                      ("cavity+", table.gamma_cavity_plus),
                      ("cavity-", table.gamma_cavity_minus)):
        for i, lab in enumerate(labels):
            row = "\t".join(f"{x:.6e}" for x in arr[i])
            lines.append(f"{name}\t{lab}\t{row}")
    (out / "rates.tsv").write_text("\n".join(lines) + "\n")
    if not args.quiet:
        print(f"rate table written to {out}/rates.tsv")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(static_dir=args.frontend_dir), host=args.host,
                port=args.port)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
