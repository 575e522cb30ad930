"""Bound-state spectrum of the static well and the critical diving depth.

The static Hamiltonian H = c*sigma1*p + sigma3*c^2 + sigma*V_s*S(z) is
assembled in momentum space: the kinetic part is block-diagonal per momentum,
the potential couples bins k, k' through the DFT of the sampled well (with
wrap-around, so the matrix is exactly the grid-multiplication operator the
propagator uses).  Bound levels are the gap eigenvalues whose eigenvectors
are localized around the well; the critical depth is found by bisection on
the tracked level crossing the gap edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericsError
from .grid import NumericalGrid, _fft_sign, mode_energy
from .potential import WellParameters, sauter_shape

GAP_EDGE_TOL = 1e-6  # fraction of c^2 shaved off the gap when filtering
LOCALIZATION_MIN = 0.9  # bound states must hold this norm fraction near the well


@dataclass(frozen=True)
class SpectrumCurve:
    """Gap eigenvalues per depth; energies in units of c^2 for presentation."""

    depths_c2: np.ndarray
    levels_c2: list[np.ndarray]  # sorted ascending per depth

    def rows(self):
        """(Vs_over_c2, level_index, energy_over_c2) triples in sweep order."""
        for depth, levels in zip(self.depths_c2, self.levels_c2):
            for idx, energy in enumerate(levels):
                yield float(depth), idx, float(energy)


def assemble_hamiltonian(
    static_depth: float, grid: NumericalGrid, params: WellParameters, c: float
) -> np.ndarray:
    """Dense Hermitian 2N x 2N momentum-space matrix of the static Hamiltonian.

    Basis ordering: upper-component FFT bins 0..N-1, then lower-component bins.
    """
    if static_depth < 0:
        raise ConfigError("static depth must be non-negative")
    n = grid.n_points
    v_grid = params.sign * static_depth * sauter_shape(grid.z, params)
    v_hat = np.fft.fft(v_grid) / n
    sign = _fft_sign(grid)
    # Circulant block V[k, k'] = (-1)^(k-k') * v_hat[(k - k') mod N]
    diff = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    v_block = np.outer(sign, sign) * v_hat[diff]

    h = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    h[:n, :n] = v_block
    h[n:, n:] = v_block
    diag = np.arange(n)
    h[diag, diag] += c**2
    h[n + diag, n + diag] -= c**2
    h[diag, n + diag] = c * grid.p
    h[n + diag, diag] = c * grid.p
    return 0.5 * (h + h.conj().T)


def _localized_fraction(vectors: np.ndarray, grid: NumericalGrid, params: WellParameters):
    """Norm fraction of each eigenvector within |z| <= D/2 + 10 W."""
    n = grid.n_points
    window = np.abs(grid.z) <= 0.5 * params.width + 10.0 * params.edge_width
    sign = _fft_sign(grid)
    psi_up = np.fft.ifft(sign[:, None] * vectors[:n, :], axis=0)
    psi_lo = np.fft.ifft(sign[:, None] * vectors[n:, :], axis=0)
    dens = np.abs(psi_up) ** 2 + np.abs(psi_lo) ** 2
    total = dens.sum(axis=0)
    return dens[window, :].sum(axis=0) / np.where(total > 0, total, 1.0)


def _gap_eigensystem(
    static_depth: float, grid: NumericalGrid, params: WellParameters, c: float
):
    """Eigenvalues/vectors restricted to localized states inside the mass gap."""
    h = assemble_hamiltonian(static_depth, grid, params, c)
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - diagnostic path
        raise NumericsError(f"eigensolver failed at depth {static_depth}: {exc}") from exc
    edge = c**2 * (1.0 - GAP_EDGE_TOL)
    in_gap = np.abs(vals) < edge
    if not np.any(in_gap):
        return np.empty(0), np.empty((2 * grid.n_points, 0))
    vals, vecs = vals[in_gap], vecs[:, in_gap]
    frac = _localized_fraction(vecs, grid, params)
    keep = frac >= LOCALIZATION_MIN
    return vals[keep], vecs[:, keep]


def bound_spectrum(
    static_depth: float, grid: NumericalGrid, params: WellParameters, c: float
) -> np.ndarray:
    """Sorted localized gap eigenvalues (a.u.) of the static well of given depth."""
    vals, _ = _gap_eigensystem(static_depth, grid, params, c)
    return np.sort(vals)


def spectrum_sweep(
    depths: np.ndarray, grid: NumericalGrid, params: WellParameters, c: float
) -> SpectrumCurve:
    """Gap spectrum for each depth (depths given in a.u.), reported in c^2 units."""
    levels = [bound_spectrum(d, grid, params, c) / c**2 for d in depths]
    return SpectrumCurve(depths_c2=np.asarray(depths) / c**2, levels_c2=levels)


def _tracked_level(vecs_ref: np.ndarray, vals: np.ndarray, vecs: np.ndarray):
    """Level maximizing eigenvector overlap with the reference vector."""
    overlaps = np.abs(vecs_ref.conj() @ vecs)
    idx = int(np.argmax(overlaps))
    return vals[idx], vecs[:, idx]


def critical_depth(
    grid: NumericalGrid,
    params: WellParameters,
    c: float,
    bracket: tuple[float, float],
    tol: float,
) -> float:
    """Depth (a.u.) at which the tracked bound level crosses the gap edge.

    The tracked level is the localized gap state closest to the edge it is
    heading for (the first level to have detached).  Bisection follows it by
    maximal eigenvector overlap, so the avoided crossings of the finite box
    near the edge do not derail the search.
    """
    lo, hi = bracket
    if not (0 <= lo < hi):
        raise ConfigError(f"invalid bracket {bracket}")
    if tol <= 0:
        raise ConfigError("tol must be positive")
    sign = params.sign  # +1: levels ascend toward +c^2; -1: descend toward -c^2
    edge = c**2

    def crossing_indicator(depth, vec_ref):
        h = assemble_hamiltonian(depth, grid, params, c)
        vals, vecs = np.linalg.eigh(h)
        if vec_ref is None:
            # Seed: the localized gap level nearest the targeted edge.
            in_gap = np.abs(vals) < edge * (1.0 - GAP_EDGE_TOL)
            if not np.any(in_gap):
                raise NumericsError(
                    f"no gap level at bracket depth {depth}; bracket contains no crossing"
                )
            gv, gw = vals[in_gap], vecs[:, in_gap]
            frac = _localized_fraction(gw, grid, params)
            keep = frac >= LOCALIZATION_MIN
            if not np.any(keep):
                raise NumericsError(
                    f"no localized gap level at bracket depth {depth}; bracket invalid"
                )
            gv, gw = gv[keep], gw[:, keep]
            idx = int(np.argmax(sign * gv))
            val, vec = gv[idx], gw[:, idx]
        else:
            val, vec = _tracked_level(vec_ref, vals, vecs)
        return sign * val - edge, vec

    g_lo, vec_lo = crossing_indicator(lo, None)
    g_hi, _ = crossing_indicator(hi, vec_lo)
    if g_lo >= 0 or g_hi <= 0:
        raise NumericsError(
            f"bracket [{lo}, {hi}] does not straddle a gap-edge crossing "
            f"(indicator {g_lo:.3e} -> {g_hi:.3e})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid, vec_mid = crossing_indicator(mid, vec_lo)
        if g_mid < 0:
            lo, vec_lo = mid, vec_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
