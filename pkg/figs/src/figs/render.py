"""Renderers for the preset figure layouts f1..f8.

Inputs are the CSV files the simulator CLI emits; headers must match the
expected schema byte for byte or rendering aborts.  Output images are
deterministic: fixed size, fixed fonts, no timestamps or software metadata.

    f1, f3   depth scans (N_s, N_c, dN curves + horizontal N_o)
    f2       bound-level fan vs depth
    f4       spatial density snapshots with well-boundary markers
    f5, f6   frequency scans (N_o, N_c, dN curves + horizontal N_s)
    f7       filled gain contour over (omega, Vs) with the optimum marked
    f8       gain-vs-depth overlay of several scans
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SWEEP_HEADER = "Vs_over_c2,omega_over_c2,N_s,N_o,N_c,dN"
SPECTRUM_HEADER = "Vs_over_c2,level_index,energy_over_c2"
DENSITY_HEADER = "z,rho_e"

FIGSIZE = (7.0, 4.6)
DPI = 120
DEFAULT_WELL_WIDTH = 10.0 / 137.036  # a.u., matches the simulator default

plt.rcParams.update(
    {
        "font.family": "DejaVu Sans",
        "font.size": 10,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "svg.hashsalt": "figs",
    }
)


class SchemaError(ValueError):
    """Input CSV does not carry the expected header."""


def read_table(path: str | Path, expected_header: str) -> dict[str, np.ndarray]:
    """Columns of a CSV whose header matches expected_header exactly."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != expected_header:
        got = lines[0] if lines else "<empty file>"
        raise SchemaError(f"{path}: header {got!r} does not match {expected_header!r}")
    names = expected_header.split(",")
    rows = [line.split(",") for line in lines[1:] if line]
    if any(len(row) != len(names) for row in rows):
        raise SchemaError(f"{path}: ragged rows")
    data = np.array([[float(x) for x in row] for row in rows]) if rows else np.empty((0, len(names)))
    return {name: data[:, i] for i, name in enumerate(names)}


def axis_label(column: str) -> str:
    """Human label; the _over_c2 suffix marks energies in units of c^2."""
    if column.endswith("_over_c2"):
        return f"{column[: -len('_over_c2')]} ($c^2$)"
    return column


def _save(fig, out_path: str | Path):
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=DPI, metadata=_no_metadata(out.suffix))
    plt.close(fig)


def _no_metadata(suffix: str):
    # strip the default Software tag so repeated renders are byte-identical
    if suffix.lower() == ".png":
        return {"Software": None}
    return None


def _single_input(inputs: list[str], figure_id: str) -> str:
    if len(inputs) != 1:
        raise SchemaError(f"{figure_id} expects exactly one input CSV, got {len(inputs)}")
    return inputs[0]


def render_depth_scan(inputs, out_path, **_):
    table = read_table(_single_input(inputs, "depth scan"), SWEEP_HEADER)
    vs = table["Vs_over_c2"]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(vs, table["N_s"], "k-.", label="$N_s$")
    ax.plot(vs, table["N_c"], "r--", label="$N_c$")
    ax.plot(vs, table["dN"], "b-", label=r"$\Delta N$")
    ax.axhline(table["N_o"][0] if len(table["N_o"]) else 0.0, color="m", lw=1.2, label="$N_o$")
    ax.set_xlabel(axis_label("Vs_over_c2"))
    ax.set_ylabel("pair number")
    ax.legend(loc="best")
    _save(fig, out_path)


def render_spectrum_fan(inputs, out_path, **_):
    table = read_table(_single_input(inputs, "spectrum fan"), SPECTRUM_HEADER)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(table["Vs_over_c2"], table["energy_over_c2"], "b.", ms=2.5)
    ax.axhline(+1.0, color="k", lw=0.8)
    ax.axhline(-1.0, color="k", lw=0.8)
    ax.set_xlabel(axis_label("Vs_over_c2"))
    ax.set_ylabel(axis_label("energy_over_c2"))
    ax.set_ylim(-1.05, 1.05)
    _save(fig, out_path)


def render_density(inputs, out_path, well_width: float = DEFAULT_WELL_WIDTH, **_):
    if not inputs:
        raise SchemaError("density figure needs at least one input CSV")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for path in inputs:
        table = read_table(path, DENSITY_HEADER)
        ax.plot(table["z"], table["rho_e"], lw=1.2, label=Path(path).stem)
    for edge in (-0.5 * well_width, +0.5 * well_width):
        ax.axvline(edge, color="k", ls=":", lw=1.0)
    ax.set_xlabel("z (a.u.)")
    ax.set_ylabel(r"$\rho_e$")
    if len(inputs) > 1:
        ax.legend(loc="best")
    _save(fig, out_path)


def render_frequency_scan(inputs, out_path, **_):
    table = read_table(_single_input(inputs, "frequency scan"), SWEEP_HEADER)
    omega = table["omega_over_c2"]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(omega, table["N_o"], "k--", label="$N_o$")
    ax.plot(omega, table["N_c"], "r-.", label="$N_c$")
    ax.plot(omega, table["dN"], "b-", label=r"$\Delta N$")
    ax.axhline(table["N_s"][0] if len(table["N_s"]) else 0.0, color="m", lw=1.2, label="$N_s$")
    ax.set_xlabel(axis_label("omega_over_c2"))
    ax.set_ylabel("pair number")
    ax.legend(loc="best")
    _save(fig, out_path)


def best_cell(table: dict[str, np.ndarray]) -> tuple[float, float, float]:
    """(omega, Vs, dN) of the maximal-gain row; ties: smaller omega, then Vs."""
    order = np.lexsort((table["Vs_over_c2"], table["omega_over_c2"], -table["dN"]))
    i = order[0]
    return float(table["omega_over_c2"][i]), float(table["Vs_over_c2"][i]), float(table["dN"][i])


def render_gain_contour(inputs, out_path, **_):
    table = read_table(_single_input(inputs, "gain contour"), SWEEP_HEADER)
    omega = np.unique(table["omega_over_c2"])
    vs = np.unique(table["Vs_over_c2"])
    if len(omega) < 2 or len(vs) < 2:
        raise SchemaError("gain contour needs a 2D grid of at least 2x2 points")
    grid = np.full((len(vs), len(omega)), np.nan)
    vs_idx = {v: i for i, v in enumerate(vs)}
    om_idx = {o: j for j, o in enumerate(omega)}
    for v, o, dn in zip(table["Vs_over_c2"], table["omega_over_c2"], table["dN"]):
        grid[vs_idx[v], om_idx[o]] = dn
    if np.any(np.isnan(grid)):
        raise SchemaError("gain contour input is not a complete rectangular grid")

    fig, ax = plt.subplots(figsize=FIGSIZE)
    mesh = ax.contourf(omega, vs, grid, levels=24, cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=r"$\Delta N$")
    o_best, v_best, dn_best = best_cell(table)
    ax.plot([o_best], [v_best], "r*", ms=12, label=rf"max $\Delta N$ = {dn_best:.3g}")
    ax.set_xlabel(axis_label("omega_over_c2"))
    ax.set_ylabel(axis_label("Vs_over_c2"))
    ax.legend(loc="best")
    _save(fig, out_path)


def render_gain_overlay(inputs, out_path, **_):
    if not inputs:
        raise SchemaError("gain overlay needs at least one input CSV")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for path in inputs:
        table = read_table(path, SWEEP_HEADER)
        omegas = np.unique(table["omega_over_c2"])
        label = (
            rf"$\omega$ = {omegas[0]:g} $c^2$" if len(omegas) == 1 else Path(path).stem
        )
        ax.plot(table["Vs_over_c2"], table["dN"], lw=1.3, label=label)
    ax.set_xlabel(axis_label("Vs_over_c2"))
    ax.set_ylabel(r"$\Delta N$")
    ax.legend(loc="best")
    _save(fig, out_path)


RENDERERS = {
    "f1": render_depth_scan,
    "f2": render_spectrum_fan,
    "f3": render_depth_scan,
    "f4": render_density,
    "f5": render_frequency_scan,
    "f6": render_frequency_scan,
    "f7": render_gain_contour,
    "f8": render_gain_overlay,
}


def render(figure_id: str, inputs: list[str], out_path: str | Path, well_width: float | None = None):
    if figure_id not in RENDERERS:
        raise SchemaError(f"unknown figure id {figure_id!r}; choose from {sorted(RENDERERS)}")
    for path in inputs:
        if not Path(path).exists():
            raise SchemaError(f"input not found: {path}")
    kwargs = {}
    if well_width is not None:
        kwargs["well_width"] = well_width
    RENDERERS[figure_id](inputs, out_path, **kwargs)
