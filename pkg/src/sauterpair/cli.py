"""Command-line front end: simulate / sweep / spectrum subcommands.

Energies on the command line are in units of c^2 (depths, frequencies,
cutoffs, brackets); lengths and times are atomic units.  A config file of
flat key=value lines can seed any run; explicit flags win over the file.

Exit codes: 0 success, 2 configuration error, 3 numerics failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, parse_config
from .errors import ConfigError, NumericsError
from .observables import run_simulation
from .spectrum import critical_depth, spectrum_sweep
from .sweep import SweepAxis, SweepPlan, find_optimum, format_float, run_sweep, write_sweep_csv

SPECTRUM_HEADER = "Vs_over_c2,level_index,energy_over_c2"


def _add_common_options(sub: argparse.ArgumentParser):
    sub.add_argument("--config", metavar="FILE", help="key=value config file")
    sub.add_argument("--out", metavar="PATH", help="output directory (or CSV path for sweeps)")
    sub.add_argument("--workers", type=int, help="process parallelism budget")
    sub.add_argument("--fast", action="store_true", help="coarse preset: N_z=128, dt=2e-7")
    sub.add_argument("--vs", type=float, help="static depth in units of c^2")
    sub.add_argument("--vo", type=float, help="oscillating depth in units of c^2")
    sub.add_argument("--omega", type=float, help="frequency in units of c^2")
    sub.add_argument("--grid-points", type=int, help="number of grid points (even)")
    sub.add_argument("--box-length", type=float, help="box length in a.u.")
    sub.add_argument("--dt", type=float, help="time step in a.u.")
    sub.add_argument("--total-time", type=float, help="pulse duration in a.u.")
    sub.add_argument("--well-width", type=float, help="well width D in a.u.")
    sub.add_argument("--edge-width", type=float, help="edge width W in a.u.")
    sub.add_argument("--cutoff", type=float, help="mode energy cutoff in units of c^2 (0 = off)")
    sub.add_argument("--shape", choices=("well", "step"), help="well profile variant")
    sub.add_argument(
        "--sign-convention", choices=("as_printed", "negated"), help="global potential sign"
    )


_FLAG_TO_FIELD = {
    "vs": "vs_c2",
    "vo": "vo_c2",
    "omega": "omega_c2",
    "grid_points": "grid_points",
    "box_length": "box_length",
    "dt": "dt",
    "total_time": "total_time",
    "well_width": "well_width",
    "edge_width": "edge_width",
    "cutoff": "cutoff_c2",
    "shape": "shape",
    "sign_convention": "sign_convention",
    "workers": "workers",
    "out": "output_dir",
}


def _build_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        config = parse_config(path.read_text(encoding="utf-8"), base=config)
    updates = {}
    for flag, field_name in _FLAG_TO_FIELD.items():
        value = getattr(args, flag, None)
        if value is not None:
            updates[field_name] = value
    if getattr(args, "fast", False):
        updates["fast"] = True
    if getattr(args, "mode", None):
        updates["mode"] = args.mode
    if getattr(args, "series_points", None):
        updates["series_points"] = args.series_points
    config = replace(config, **updates)
    return config.with_fast_preset()


def _parse_axis(spec: str) -> SweepAxis:
    try:
        name, rng = spec.split("=", 1)
        start, stop, step = (float(x) for x in rng.split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad axis spec {spec!r}; expected NAME=START:STOP:STEP") from exc
    return SweepAxis(name=name.strip(), start=start, stop=stop, step=step)


def _parse_range(spec: str, what: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad {what} spec {spec!r}; expected START:STOP:STEP") from exc
    return start, stop, step


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _build_config(args)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    grid = config.make_grid()
    basis = config.make_basis(grid)
    stepper = config.make_stepper()
    well = config.make_well()
    times = np.linspace(0.0, stepper.total_time, config.series_points)

    t0 = time.perf_counter()
    obs = run_simulation(
        well, stepper, grid, basis, mode=config.mode,
        snapshot_times=times, workers=config.workers,
    )
    wall = time.perf_counter() - t0

    with open(out_dir / "timeseries.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,N\n")
        for t, n in zip(obs.times, obs.counts):
            fh.write(f"{format_float(t)},{format_float(n)}\n")

    # Close the periodic box with a final z = +L/2 row so a trapezoid over the
    # file equals the grid sum exactly.
    with open(out_dir / "density.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("z,rho_e\n")
        for z, rho in zip(grid.z, obs.rho_final):
            fh.write(f"{format_float(z)},{format_float(rho)}\n")
        fh.write(f"{format_float(grid.length / 2)},{format_float(obs.rho_final[0])}\n")

    summary = {
        "N_final": format_float(obs.n_final),
        "mode": config.mode,
        "vs_c2": config.vs_c2,
        "vo_c2": config.vo_c2,
        "omega_c2": config.omega_c2,
        "grid_points": config.grid_points,
        "dt": stepper.dt,
        "total_time": stepper.total_time,
        "n_steps": stepper.n_steps,
        "workers": config.workers,
        "version": __version__,
        "wall_time_s": f"{wall:.3f}",
    }
    with open(out_dir / "summary.txt", "w", encoding="utf-8", newline="\n") as fh:
        for key, value in summary.items():
            fh.write(f"{key}={value}\n")
    print(f"N(T) = {obs.n_final:.6g}  ({wall:.1f}s, outputs in {out_dir})")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if not args.axis:
        raise ConfigError("sweep needs at least one --axis NAME=START:STOP:STEP")
    axes = tuple(_parse_axis(spec) for spec in args.axis)
    out_path = Path(args.out) if args.out else Path(config.output_dir) / "sweep.csv"
    plan = SweepPlan(axes=axes, config=config, output_path=str(out_path))
    journal = args.journal or (str(out_path) + ".journal.jsonl")

    t0 = time.perf_counter()
    records = run_sweep(
        plan,
        workers=config.workers,
        cache=not args.no_cache,
        journal_path=journal,
        resume=args.resume,
    )
    wall = time.perf_counter() - t0
    write_sweep_csv(out_path, records, config, wall_time_s=wall)
    best = find_optimum(records)
    print(
        f"{len(records)} points -> {out_path}  "
        f"(max dN = {best.gain:.6g} at Vs={best.vs_c2}c^2, omega={best.omega_c2}c^2; {wall:.1f}s)"
    )
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    config = _build_config(args)
    grid = config.make_grid()
    well = config.make_well()
    out_path = Path(args.out) if args.out else Path(config.output_dir) / "spectrum.csv"

    if args.depths:
        start, stop, step = _parse_range(args.depths, "depth axis")
        axis = SweepAxis(name="Vs", start=start, stop=stop, step=step)
        depths_au = [v * config.c2 for v in axis.values]
        curve = spectrum_sweep(np.array(depths_au), grid, well, config.c)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(SPECTRUM_HEADER + "\n")
            for vs_c2, idx, energy_c2 in curve.rows():
                fh.write(f"{format_float(vs_c2)},{idx},{format_float(energy_c2)}\n")
        print(f"spectrum for {len(depths_au)} depths -> {out_path}")

    if args.critical:
        lo, hi = (
            (float(x) for x in args.bracket.split(":"))
            if args.bracket
            else (1.9, 2.2)
        )
        tol = args.tol if args.tol is not None else 0.005
        depth = critical_depth(
            grid, well, config.c, bracket=(lo * config.c2, hi * config.c2), tol=tol * config.c2
        )
        print(f"critical depth = {depth / config.c2:.4f} c^2")

    if not args.depths and not args.critical:
        raise ConfigError("spectrum needs --depths and/or --critical")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sauterpair",
        description="Pair creation in combined static + oscillating Sauter wells",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="single run: N(t), density, summary")
    _add_common_options(sim)
    sim.add_argument(
        "--mode",
        choices=("combined", "static_only", "oscillating_only"),
        help="which potential terms act",
    )
    sim.add_argument("--series-points", type=int, dest="series_points", help="N(t) samples")
    sim.set_defaults(func=cmd_simulate)

    swp = subs.add_parser("sweep", help="scan depth and/or frequency, emit CSV")
    _add_common_options(swp)
    swp.add_argument(
        "--axis", action="append", metavar="NAME=START:STOP:STEP",
        help="swept parameter in units of c^2; Vs or omega; repeatable",
    )
    swp.add_argument("--no-cache", action="store_true", help="recompute shared runs per point")
    swp.add_argument("--resume", action="store_true", help="reuse journaled runs if numerics match")
    swp.add_argument("--journal", metavar="FILE", help="journal path (default <out>.journal.jsonl)")
    swp.set_defaults(func=cmd_sweep)

    spec = subs.add_parser("spectrum", help="bound-state levels of the static well")
    _add_common_options(spec)
    spec.add_argument("--depths", metavar="START:STOP:STEP", help="depth axis in units of c^2")
    spec.add_argument("--critical", action="store_true", help="bisect the gap-edge crossing depth")
    spec.add_argument("--bracket", metavar="LO:HI", help="crossing bracket in units of c^2")
    spec.add_argument("--tol", type=float, help="bisection tolerance in units of c^2")
    spec.set_defaults(func=cmd_spectrum)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on bad usage
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerics failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
