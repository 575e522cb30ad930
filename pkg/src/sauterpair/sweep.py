"""Parameter scans over static depth and oscillation frequency.

A sweep point needs three pair counts (combined, static-only, oscillating-
only).  The static count depends only on V_s and the oscillating count only
on omega, so each distinct value is simulated once and shared across the scan
(the run cache).  Completed runs are journaled to a JSONL file so an
interrupted scan can resume without recomputing; the journal is only trusted
when the numerics digest matches.

Records are emitted in row-major axis order with the exact CSV schema

    Vs_over_c2,omega_over_c2,N_s,N_o,N_c,dN

(9 significant digits, '\n' line endings).  The dN column is computed from
the rounded printed counts, so re-deriving N_c - N_s - N_o from a parsed row
reproduces the dN field exactly.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .config import RunConfig
from .errors import ConfigError, NumericsError
from .observables import run_simulation

AXIS_NAMES = ("Vs", "omega")
CSV_HEADER = "Vs_over_c2,omega_over_c2,N_s,N_o,N_c,dN"

_KIND_TO_MODE = {"static": "static_only", "osc": "oscillating_only", "combined": "combined"}


@dataclass(frozen=True)
class SweepAxis:
    name: str  # "Vs" or "omega"
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"axis name must be one of {AXIS_NAMES}, got {self.name!r}")
        if self.step <= 0:
            raise ConfigError("axis step must be positive")
        if self.start > self.stop:
            raise ConfigError("axis start must not exceed stop")

    @property
    def values(self) -> list[float]:
        count = int((self.stop - self.start) / self.step + 1e-9) + 1
        return [self.start + i * self.step for i in range(count)]


@dataclass(frozen=True)
class SweepPlan:
    axes: tuple[SweepAxis, ...]
    config: RunConfig  # fixed parameters + numerics; axis values override vs/omega
    output_path: str | None = None

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError("a sweep needs one or two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("sweep axes must be distinct parameters")

    def points(self) -> list[tuple[float, float]]:
        """(vs_c2, omega_c2) per grid point, row-major in axis order."""
        fixed = {"Vs": self.config.vs_c2, "omega": self.config.omega_c2}
        grids = [(axis.name, axis.values) for axis in self.axes]
        points = []
        if len(grids) == 1:
            name, values = grids[0]
            for v in values:
                spot = dict(fixed, **{name: v})
                points.append((spot["Vs"], spot["omega"]))
        else:
            (n0, v0), (n1, v1) = grids
            for a in v0:
                for b in v1:
                    spot = dict(fixed, **{n0: a, n1: b})
                    points.append((spot["Vs"], spot["omega"]))
        return points


@dataclass(frozen=True)
class SweepRecord:
    vs_c2: float
    omega_c2: float
    n_static: float
    n_oscillating: float
    n_combined: float

    @property
    def gain(self) -> float:
        return self.n_combined - self.n_static - self.n_oscillating


def _run_key(kind: str, vs_c2: float, omega_c2: float) -> tuple:
    if kind == "static":
        return ("static", vs_c2)
    if kind == "osc":
        return ("osc", omega_c2)
    return ("combined", vs_c2, omega_c2)


def _execute_run(kind: str, vs_c2: float, omega_c2: float, config: RunConfig) -> float:
    grid = config.make_grid()
    basis = config.make_basis(grid)
    stepper = config.make_stepper()
    well = config.make_well(vs_c2=vs_c2, omega_c2=omega_c2)
    obs = run_simulation(
        well, stepper, grid, basis, mode=_KIND_TO_MODE[kind],
        snapshot_times=[stepper.total_time], workers=1,
    )
    return obs.n_final


def run_sweep(
    plan: SweepPlan,
    workers: int = 1,
    cache: bool = True,
    journal_path: str | Path | None = None,
    resume: bool = False,
) -> list[SweepRecord]:
    """Execute every point of the plan; see module docstring for semantics."""
    config = plan.config
    points = plan.points()
    if not points:
        raise ConfigError("sweep plan contains no points")
    digest = config.numerics_digest()

    # One task per needed run; with the cache on, duplicates collapse.
    tasks: list[tuple] = []
    seen = set()
    for vs, om in points:
        for kind in ("static", "osc", "combined"):
            key = _run_key(kind, vs, om)
            if cache:
                if key in seen:
                    continue
                seen.add(key)
            tasks.append((key, kind, vs, om))

    done: dict[tuple, float] = {}
    if resume and journal_path is not None and Path(journal_path).exists():
        for line in Path(journal_path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            if entry.get("digest") == digest:
                done[tuple(entry["key"])] = entry["n"]

    pending = [t for t in tasks if t[0] not in done]
    journal = None
    if journal_path is not None:
        Path(journal_path).parent.mkdir(parents=True, exist_ok=True)
        journal = open(journal_path, "a" if resume else "w", encoding="utf-8")

    def note(key: tuple, value: float):
        done[key] = value
        if journal is not None:
            journal.write(json.dumps({"key": list(key), "n": value, "digest": digest}) + "\n")
            journal.flush()

    try:
        if workers <= 1 or len(pending) <= 1:
            for key, kind, vs, om in pending:
                try:
                    note(key, _execute_run(kind, vs, om, config))
                except NumericsError as exc:
                    raise NumericsError(
                        f"sweep point Vs={vs}c^2 omega={om}c^2 ({kind}) failed: {exc}"
                    ) from exc
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    (key, kind, vs, om, pool.submit(_execute_run, kind, vs, om, config))
                    for key, kind, vs, om in pending
                ]
                for key, kind, vs, om, fut in futures:
                    try:
                        note(key, fut.result())
                    except NumericsError as exc:
                        raise NumericsError(
                            f"sweep point Vs={vs}c^2 omega={om}c^2 ({kind}) failed: {exc}"
                        ) from exc
    finally:
        if journal is not None:
            journal.close()

    records = []
    for vs, om in points:
        # Without the cache, duplicate keys were still executed once per task
        # list entry; results are identical by determinism, last write wins.
        records.append(
            SweepRecord(
                vs_c2=vs,
                omega_c2=om,
                n_static=done[_run_key("static", vs, om)],
                n_oscillating=done[_run_key("osc", vs, om)],
                n_combined=done[_run_key("combined", vs, om)],
            )
        )
    return records


def find_optimum(records: list[SweepRecord]) -> SweepRecord:
    """Record with the largest gain; ties go to smaller omega, then smaller V_s."""
    if not records:
        raise ConfigError("find_optimum needs at least one record")
    best = records[0]
    for rec in records[1:]:
        if rec.gain > best.gain or (
            rec.gain == best.gain
            and (rec.omega_c2, rec.vs_c2) < (best.omega_c2, best.vs_c2)
        ):
            best = rec
    return best


def format_float(x: float) -> str:
    return f"{x:.9g}"


def records_to_csv(records: list[SweepRecord]) -> str:
    """CSV text with the exact sweep schema; see module docstring."""
    lines = [CSV_HEADER]
    for rec in records:
        ns, no, nc = (format_float(v) for v in (rec.n_static, rec.n_oscillating, rec.n_combined))
        dn = format_float(float(nc) - float(ns) - float(no))
        lines.append(
            f"{format_float(rec.vs_c2)},{format_float(rec.omega_c2)},{ns},{no},{nc},{dn}"
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(
    path: str | Path,
    records: list[SweepRecord],
    config: RunConfig,
    wall_time_s: float | None = None,
) -> None:
    """Write the records plus a sidecar metadata file (<path>.meta.json)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(records_to_csv(records))
    meta = {
        "version": __version__,
        "numerics_digest": config.numerics_digest(),
        "c": config.c,
        "box_length": config.box_length,
        "grid_points": config.grid_points,
        "dt": config.make_stepper().dt,
        "total_time": config.total_time,
        "vo_c2": config.vo_c2,
        "well_width_au": config.well_width_au,
        "edge_width_au": config.edge_width_au,
        "shape": config.shape,
        "sign_convention": config.sign_convention,
        "rows": len(records),
        "wall_time_s": wall_time_s if wall_time_s is not None else -1.0,
    }
    with open(str(path) + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    """Parse a sweep CSV, verifying the header and the dN checksum per row."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigError(f"{path}: header mismatch (expected {CSV_HEADER!r})")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 6:
            raise ConfigError(f"{path}:{lineno}: expected 6 columns")
        vs, om, ns, no, nc, dn = (float(p) for p in parts)
        if format_float(nc - ns - no) != parts[5]:
            raise ConfigError(f"{path}:{lineno}: dN checksum mismatch")
        records.append(
            SweepRecord(vs_c2=vs, omega_c2=om, n_static=ns, n_oscillating=no, n_combined=nc)
        )
    return records
