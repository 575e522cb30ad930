import numpy as np
import pytest

from sauterpair.cli import main
from sauterpair.config import RunConfig, parse_config, render_config
from sauterpair.errors import ConfigError

FAST_FLAGS = ["--grid-points", "32", "--dt", "1e-5"]


def read_csv(path):
    rows = [line.split(",") for line in path.read_text(encoding="utf-8").splitlines()]
    header, data = rows[0], rows[1:]
    return header, np.array([[float(x) for x in row] for row in data])


def test_config_round_trip():
    for config in (RunConfig(), RunConfig(vs_c2=2.5, omega_c2=0.08, fast=True, workers=3)):
        assert parse_config(render_config(config)) == config


def test_config_rejects_unknown_and_malformed():
    with pytest.raises(ConfigError, match="unknown config key"):
        parse_config("depth=3\n")
    with pytest.raises(ConfigError, match="cannot parse"):
        parse_config("grid_points=many\n")
    with pytest.raises(ConfigError, match="expected key=value"):
        parse_config("just words\n")
    with pytest.raises(ConfigError):
        RunConfig(grid_points=64, mode="inverted")


def test_config_comments_and_blank_lines():
    config = parse_config("# a comment\n\nvs_c2 = 1.5  # inline\n")
    assert config.vs_c2 == 1.5


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("vs_c2=1.0\ngrid_points=32\ndt=1e-5\nomega_c2=1.5\n")
    out = tmp_path / "out"
    code = main(["simulate", "--config", str(cfg), "--vs", "0.0", "--out", str(out)])
    assert code == 0
    summary = dict(
        line.split("=", 1) for line in (out / "summary.txt").read_text().splitlines()
    )
    assert summary["vs_c2"] == "0.0"
    assert summary["grid_points"] == "32"


def test_simulate_outputs_are_consistent(tmp_path):
    out = tmp_path / "run"
    code = main(
        ["simulate", "--vs", "0", "--omega", "1.5", "--out", str(out), *FAST_FLAGS]
    )
    assert code == 0
    header, ts = read_csv(out / "timeseries.csv")
    assert header == ["t", "N"]
    assert ts[0, 0] == 0.0 and ts[0, 1] < 1e-10
    assert ts[-1, 0] == pytest.approx(0.002)

    header, dens = read_csv(out / "density.csv")
    assert header == ["z", "rho_e"]
    assert dens[0, 0] == pytest.approx(-0.6) and dens[-1, 0] == pytest.approx(0.6)
    summary = dict(
        line.split("=", 1) for line in (out / "summary.txt").read_text().splitlines()
    )
    # trapezoid over the emitted file reproduces the reported count
    integral = np.trapezoid(dens[:, 1], dens[:, 0])
    assert integral == pytest.approx(float(summary["N_final"]), rel=1e-6)


def test_simulate_vacuum(tmp_path):
    out = tmp_path / "vac"
    code = main(["simulate", "--vs", "0", "--vo", "0", "--out", str(out), *FAST_FLAGS])
    assert code == 0
    summary = dict(
        line.split("=", 1) for line in (out / "summary.txt").read_text().splitlines()
    )
    assert float(summary["N_final"]) < 1e-10


def test_outputs_deterministic_across_reruns_and_workers(tmp_path):
    outs = []
    for name, workers in (("a", "1"), ("b", "1"), ("c", "2")):
        out = tmp_path / name
        code = main(
            ["simulate", "--vs", "0.5", "--omega", "1.5", "--workers", workers,
             "--out", str(out), *FAST_FLAGS]
        )
        assert code == 0
        outs.append(out)
    ts = [(p / "timeseries.csv").read_bytes() for p in outs]
    dens = [(p / "density.csv").read_bytes() for p in outs]
    assert ts[0] == ts[1] == ts[2]
    assert dens[0] == dens[1] == dens[2]
    # summaries agree apart from runtime metadata (wall time, worker count)
    runtime_keys = ("wall_time", "workers")
    sums = [
        [l for l in (p / "summary.txt").read_text().splitlines()
         if not l.startswith(runtime_keys)]
        for p in outs
    ]
    assert sums[0] == sums[1] == sums[2]


def test_fast_preset_applies(tmp_path):
    out = tmp_path / "fast"
    code = main(["simulate", "--vs", "0", "--vo", "0", "--fast", "--out", str(out)])
    assert code == 0
    summary = dict(
        line.split("=", 1) for line in (out / "summary.txt").read_text().splitlines()
    )
    assert summary["grid_points"] == "128"
    assert float(summary["dt"]) == pytest.approx(2e-7)


def test_sweep_single_point(tmp_path):
    out = tmp_path / "one.csv"
    code = main(
        ["sweep", "--axis", "Vs=0:0:1", "--omega", "1.5", "--out", str(out), *FAST_FLAGS]
    )
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "Vs_over_c2,omega_over_c2,N_s,N_o,N_c,dN"
    assert len(lines) == 2


def test_sweep_requires_axis():
    assert main(["sweep", "--omega", "1.5", *FAST_FLAGS]) == 2


def test_sweep_rejects_bad_axis(tmp_path):
    code = main(["sweep", "--axis", "Vs=0..3", "--out", str(tmp_path / "x.csv"), *FAST_FLAGS])
    assert code == 2


def test_spectrum_csv_and_critical(tmp_path, capsys):
    out = tmp_path / "levels.csv"
    code = main(
        ["spectrum", "--depths", "0:1:0.5", "--grid-points", "64", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "Vs_over_c2,level_index,energy_over_c2"
    assert all(line.split(",")[0] in ("0", "0.5", "1") for line in lines[1:])
    # depth 0 contributes no rows
    assert not any(line.startswith("0,") for line in lines[1:])

    code = main(
        ["spectrum", "--critical", "--grid-points", "64", "--bracket", "1.9:2.2",
         "--tol", "0.01", "--out", str(tmp_path / "unused.csv")]
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert "critical depth" in printed


def test_spectrum_bad_bracket_is_numerics_failure(tmp_path):
    code = main(["spectrum", "--critical", "--grid-points", "64", "--bracket", "0:0.1"])
    assert code == 3


def test_config_error_exit_code(tmp_path):
    code = main(["simulate", "--grid-points", "15", "--out", str(tmp_path / "x")])
    assert code == 2


def test_bad_usage_exit_code():
    assert main(["simulate", "--no-such-flag"]) == 2
    assert main(["frobnicate"]) == 2
