"""Acceptance gate: one test per criterion, one printed PASS/FAIL line each.

Target values carry loose tolerances because grid size and time step are
free choices of this implementation.  Scans run on the default 256-point
grid with dt = 5e-7, which reproduces the dt = 1e-7 landmark values to four
decimals at a quarter of the cost (dt sensitivity at these parameters is far
below every stated tolerance; the dedicated self-convergence criterion still
runs at the true defaults).

Wall-clock budget of the whole module is roughly 20 minutes on two cores.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from sauterpair.config import RunConfig
from sauterpair.observables import gain_number, run_simulation
from sauterpair.spectrum import critical_depth
from sauterpair.sweep import SweepAxis, SweepPlan, find_optimum, records_to_csv, run_sweep

DEFAULTS = RunConfig()  # N_z = 256, dt = 1e-7, T = 0.002, V_o = 1.47 c^2
SCAN = replace(DEFAULTS, dt=5e-7)
WORKERS = 2


def report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}", flush=True)
    assert ok, f"{name}: {detail}"


def default_run(vs_c2, omega_c2, mode, diagnostics=False, config=DEFAULTS):
    grid = config.make_grid()
    basis = config.make_basis(grid)
    stepper = config.make_stepper()
    well = config.make_well(vs_c2=vs_c2, omega_c2=omega_c2)
    return run_simulation(
        well, stepper, grid, basis, mode=mode,
        snapshot_times=[stepper.total_time], workers=WORKERS, diagnostics=diagnostics,
    )


@pytest.fixture(scope="module")
def sweep_journal(tmp_path_factory):
    # One journal for every scan: static runs depend only on V_s and
    # oscillating runs only on omega, so scans at different fixed parameters
    # legitimately share them.
    return tmp_path_factory.mktemp("acceptance") / "runs.jsonl"


def scan(axes, vs_c2=0.0, omega_c2=0.0, journal=None):
    config = replace(SCAN, vs_c2=vs_c2, omega_c2=omega_c2)
    plan = SweepPlan(axes=axes, config=config)
    return run_sweep(plan, workers=WORKERS, journal_path=journal, resume=True)


@pytest.fixture(scope="module")
def combined_characteristic():
    """Combined run at V_s=2.5c^2, omega=1.5c^2, true defaults, diagnostics on."""
    return default_run(2.5, 1.5, "combined", diagnostics=True)


def test_vacuum_stability():
    t0 = time.perf_counter()
    obs = default_run(0.0, 1.5, "static_only")  # V_s = 0: potential vanishes
    wall = time.perf_counter() - t0
    ok = obs.n_final < 1e-10 and wall < 120.0
    report("vacuum stability", ok, f"N(T) = {obs.n_final:.3e}, {wall:.0f}s (< 1e-10, < 120s)")


def test_unitarity_and_completeness(combined_characteristic):
    obs = combined_characteristic
    norm_err = float(np.max(np.abs(obs.diagnostics["norms"] - 1.0)))
    comp_err = float(np.max(np.abs(obs.diagnostics["completeness"] - 1.0)))
    ok = norm_err < 1e-8 and comp_err < 1e-8
    report(
        "unitarity & completeness", ok,
        f"max |norm-1| = {norm_err:.2e}, max |sum-1| = {comp_err:.2e} (< 1e-8)",
    )


def test_charge_conjugation_invariance(combined_characteristic):
    flipped = default_run(
        2.5, 1.5, "combined", config=replace(DEFAULTS, sign_convention="negated")
    )
    rel = abs(flipped.n_final - combined_characteristic.n_final) / combined_characteristic.n_final
    report(
        "charge-conjugation invariance", rel < 1e-6,
        f"N = {combined_characteristic.n_final:.8f} vs {flipped.n_final:.8f}, rel diff {rel:.2e} (< 1e-6)",
    )


def test_sweep_determinism():
    # Plumbing property: worker count and caching must not change a byte.
    tiny = replace(DEFAULTS, grid_points=32, dt=1e-5, vs_c2=0.5)
    plan = SweepPlan(axes=(SweepAxis("omega", 1.0, 2.0, 0.5),), config=tiny)
    variants = {
        (workers, cache): records_to_csv(run_sweep(plan, workers=workers, cache=cache))
        for workers in (1, 2) for cache in (True, False)
    }
    texts = set(variants.values())
    report(
        "sweep determinism", len(texts) == 1,
        f"{len(variants)} worker/cache variants -> {len(texts)} distinct CSV byte streams",
    )


def test_self_convergence():
    base = default_run(2.1, 1.5, "combined")
    refined_cfg = replace(DEFAULTS, grid_points=512, dt=5e-8)
    refined = default_run(2.1, 1.5, "combined", config=refined_cfg)
    rel = abs(refined.n_final - base.n_final) / base.n_final
    report(
        "self-convergence", rel < 0.01,
        f"N = {base.n_final:.5f} -> {refined.n_final:.5f} at (2 N_z, dt/2): {rel * 100:.2f}% (< 1%)",
    )


def test_oscillating_well_counts():
    targets = {1.5: 0.610, 2.5: 4.099}
    details = []
    ok = True
    for omega, target in targets.items():
        t0 = time.perf_counter()
        obs = default_run(0.0, omega, "oscillating_only")
        wall = time.perf_counter() - t0
        rel = abs(obs.n_final - target) / target
        ok = ok and rel < 0.10 and wall < 330.0
        details.append(f"omega={omega}c^2: N_o = {obs.n_final:.4f} vs {target} ({rel * 100:+.1f}%, {wall:.0f}s)")
    report("oscillating-well counts", ok, "; ".join(details) + " (tol 10%, < ~5min)")


def test_critical_depth():
    config = DEFAULTS
    grid = config.make_grid()
    well = config.make_well()
    t0 = time.perf_counter()
    depth = critical_depth(
        grid, well, config.c, bracket=(1.9 * config.c2, 2.2 * config.c2), tol=0.005 * config.c2
    )
    wall = time.perf_counter() - t0
    depth_c2 = depth / config.c2
    ok = abs(depth_c2 - 2.04) <= 0.03 and wall < 300.0
    report("critical depth", ok, f"{depth_c2:.4f} c^2 vs 2.04 +- 0.03 ({wall:.0f}s)")


def test_depth_scan_multiphoton_landmarks(sweep_journal):
    # omega = 1.5 c^2 depth scan, 0..3 c^2 in 0.1 c^2 steps (coarse grid allowed).
    records = scan((SweepAxis("Vs", 0.0, 3.0, 0.1),), omega_c2=1.5, journal=sweep_journal)
    by_vs = {round(r.vs_c2, 3): r for r in records}
    gains = np.array([r.gain for r in records])
    peak = find_optimum(records)

    # part I: gain indistinguishable from zero on the scale of the peak
    flat = max(abs(by_vs[v].gain) for v in (0.1, 0.2, 0.3))
    ok_flat = flat <= 0.05 * peak.gain
    # part II: gain rises with depth
    ladder = [by_vs[v].gain for v in (0.5, 1.0, 1.5, 2.0)]
    ok_rise = all(b > a for a, b in zip(ladder, ladder[1:])) and ladder[-1] - ladder[0] > 1.0
    # part III onset: peak height and location
    ok_peak = abs(peak.gain - 2.557) / 2.557 <= 0.15 and abs(peak.vs_c2 - 2.1) <= 0.1 + 1e-9
    ok = ok_flat and ok_rise and ok_peak
    report(
        "depth scan (multiphoton) landmarks", ok,
        f"|dN|<=({flat:.3f}) below 0.33c^2, rise {ladder[0]:.3f}->{ladder[-1]:.3f}, "
        f"peak dN = {peak.gain:.3f} at Vs = {peak.vs_c2:.2f} c^2 (2.557 +- 15% at 2.1 +- 0.1)",
    )
    assert np.all(np.isfinite(gains))


def test_depth_scan_single_photon_landmarks(sweep_journal):
    # omega = 2.5 c^2 depth scan across parts II-III.
    records = scan((SweepAxis("Vs", 0.2, 3.0, 0.1),), omega_c2=2.5, journal=sweep_journal)
    n_c = np.array([r.n_combined for r in records])
    vs = np.array([r.vs_c2 for r in records])
    idx = int(np.argmin(n_c))
    ok_min = abs(n_c[idx] - 3.183) / 3.183 <= 0.15 and abs(vs[idx] - 2.01) <= 0.1 + 1e-9
    # gain stays non-positive through parts II-III (0.05 slack for scan noise)
    gains = np.array([r.gain for r in records if r.vs_c2 >= 0.3 - 1e-9])
    ok_sign = float(np.max(gains)) <= 0.05
    ok = ok_min and ok_sign
    report(
        "depth scan (single-photon) landmarks", ok,
        f"min N_c = {n_c[idx]:.3f} at Vs = {vs[idx]:.2f} c^2 (3.183 +- 15% at 2.01 +- 0.1); "
        f"max dN in II-III = {float(np.max(gains)):.3f} (<= 0.05)",
    )


def test_frequency_scan_subcritical_landmark(sweep_journal):
    # V_s = 0.5 c^2: dynamical assistance peaks just below the 2 c^2 threshold.
    records = scan((SweepAxis("omega", 1.0, 2.5, 0.1),), vs_c2=0.5, journal=sweep_journal)
    best = find_optimum(records)
    ok = abs(best.omega_c2 - 1.9) <= 0.1 + 1e-9
    report(
        "frequency scan (Vs=0.5c^2)", ok,
        f"max dN = {best.gain:.3f} at omega = {best.omega_c2:.2f} c^2 (1.9 +- 0.1)",
    )


def test_frequency_scan_supercritical_landmarks(sweep_journal):
    # V_s = 2.5 c^2: low-frequency peak and the single-photon minimum at 3 c^2.
    records = scan((SweepAxis("omega", 0.02, 0.22, 0.02),), vs_c2=2.5, journal=sweep_journal)
    best = find_optimum(records)
    ok_peak = abs(best.omega_c2 - 0.08) <= 0.04 + 1e-9

    config = replace(SCAN, vs_c2=2.5, omega_c2=3.0)
    grid = config.make_grid()
    result = gain_number(
        config.make_well(), config.make_stepper(), grid, config.make_basis(grid), workers=WORKERS
    )
    ok_min = abs(result.gain - (-1.673)) / 1.673 <= 0.15
    ok = ok_peak and ok_min
    report(
        "frequency scan (Vs=2.5c^2)", ok,
        f"max dN = {best.gain:.3f} at omega = {best.omega_c2:.2f} c^2 (0.08 +- 0.04); "
        f"dN(omega=3c^2) = {result.gain:.3f} (-1.673 +- 15%)",
    )


def test_optimum_depth_at_low_frequency(sweep_journal):
    records = scan((SweepAxis("Vs", 2.2, 3.0, 0.05),), omega_c2=0.08, journal=sweep_journal)
    best = find_optimum(records)
    ok = abs(best.vs_c2 - 2.58) <= 0.1 + 1e-9 and abs(best.gain - 4.22) / 4.22 <= 0.15
    report(
        "optimum depth at omega=0.08c^2", ok,
        f"dN = {best.gain:.3f} at Vs = {best.vs_c2:.2f} c^2 (4.22 +- 15% at 2.58 +- 0.1)",
    )
