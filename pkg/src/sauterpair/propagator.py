"""Strang-split unitary evolution of spinor fields under the time-dependent well.

One step over dt:  K(dt/2) * V(t + dt/2) * K(dt/2), with
  K(tau): per momentum p, the exact 2x2 exponential
          exp(-i*H0(p)*tau) = cos(E_p tau) I - i sin(E_p tau)/E_p * H0(p)
          applied in momentum space (diagonal in p), and
  V(t):   the diagonal position-space phase exp(-i * V(z, t) * dt).

Adjacent kinetic half-steps of consecutive steps are fused into full steps;
snapshot boundaries temporarily unfuse so the recorded state is the exact
state at t = m*dt.  Every factor is unitary, so the norm is conserved to
rounding over the full run.

Batches are component-major, shape (2, n_states, N_z): both spinor components
are then contiguous planes, which keeps the FFTs and the 2x2 multiplies on
contiguous memory (the loop is memory-bound).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.fft as sfft

from .errors import ConfigError, NumericsError
from .grid import FreeModeBasis, NumericalGrid, SpinorField, _require_same_grid, mode_energy
from .potential import WellParameters, peak_depth, sauter_shape, time_amplitude

# Strang accuracy guard: potential phase per step should stay below this.
MAX_PHASE_PER_STEP = 0.05

# Abort threshold for the per-run norm drift.
NORM_ABORT = 1e-6


@dataclass(frozen=True)
class StepperConfig:
    """Time discretization: dt is adjusted at construction to divide T exactly."""

    dt: float = 1e-7
    total_time: float = 0.002
    midpoint_sampling: bool = True
    n_steps: int = field(init=False)

    def __post_init__(self):
        if self.dt <= 0 or self.total_time <= 0:
            raise ConfigError("dt and total_time must be positive")
        ratio = self.total_time / self.dt
        n = int(round(ratio))
        if n < 1 or abs(ratio - n) > 0.5:
            raise ConfigError(f"T/dt = {ratio} is not within 0.5 of a positive integer")
        object.__setattr__(self, "n_steps", n)
        object.__setattr__(self, "dt", self.total_time / n)

    def step_of(self, t: float) -> int:
        """Nearest step index for time t; clipped to [0, n_steps]."""
        return int(np.clip(round(t / self.dt), 0, self.n_steps))


def _kinetic_factors(grid: NumericalGrid, c: float, tau: float):
    """Entries of exp(-i*H0(p)*tau) for all FFT bins: (k11, k12, k22); k21 = k12."""
    energy = mode_energy(grid.p, c)
    cos_t = np.cos(energy * tau)
    sinc = np.sin(energy * tau) / energy
    k11 = cos_t - 1j * sinc * c**2
    k22 = cos_t + 1j * sinc * c**2
    k12 = -1j * sinc * c * grid.p
    return k11, k12, k22


class _KineticOp:
    """Preallocated in-place application of a fixed kinetic exponential."""

    def __init__(self, grid: NumericalGrid, c: float, tau: float, batch_shape):
        self.k11, self.k12, self.k22 = _kinetic_factors(grid, c, tau)
        self._new_up = np.empty(batch_shape, dtype=np.complex128)
        self._tmp = np.empty(batch_shape, dtype=np.complex128)

    def apply(self, state_k: np.ndarray) -> None:
        up, lo = state_k[0], state_k[1]
        np.multiply(up, self.k11, out=self._new_up)
        np.multiply(lo, self.k12, out=self._tmp)
        self._new_up += self._tmp
        np.multiply(up, self.k12, out=self._tmp)
        np.multiply(lo, self.k22, out=lo)
        lo += self._tmp
        up[:] = self._new_up


def _apply_kinetic(state_k: np.ndarray, factors) -> None:
    """Out-of-place 2x2 kinetic multiply for small one-off uses."""
    k11, k12, k22 = factors
    up = state_k[0].copy()
    state_k[0] = k11 * up + k12 * state_k[1]
    state_k[1] = k12 * up + k22 * state_k[1]


def kinetic_half_step(field: SpinorField, basis: FreeModeBasis, tau: float) -> SpinorField:
    """Apply exp(-i*H0*tau) to a single field (free evolution over tau)."""
    if tau <= 0:
        raise ConfigError("tau must be positive")
    grid = field.grid
    state_k = np.fft.fft(field.values[:, None, :], axis=-1)
    _apply_kinetic(state_k, _kinetic_factors(grid, basis.c, tau))
    return SpinorField(values=np.fft.ifft(state_k, axis=-1)[:, 0, :], grid=grid)


def potential_step(
    field: SpinorField, t_mid: float, params: WellParameters, mode: str, dt: float
) -> SpinorField:
    """Multiply both spinor components by exp(-i * V(z, t_mid) * dt)."""
    phase = np.exp(
        -1j * dt * time_amplitude(t_mid, params, mode) * sauter_shape(field.grid.z, params)
    )
    return SpinorField(values=field.values * phase, grid=field.grid)


def evolve_batch(
    states: np.ndarray,
    grid: NumericalGrid,
    c: float,
    params: WellParameters,
    stepper: StepperConfig,
    mode: str = "combined",
    t_start: float = 0.0,
    snapshot_steps: tuple[int, ...] = (),
    on_snapshot: Callable[[int, np.ndarray], None] | None = None,
    fft_workers: int = 1,
) -> np.ndarray:
    """Evolve a batch (2, n_states, N_z) from t_start over stepper.total_time.

    on_snapshot(step_index, state_k) is called with the raw momentum-space
    amplitudes (numpy FFT layout, not mode coefficients) at the exact step
    boundaries listed in snapshot_steps.  The callback must not keep a
    reference to state_k: the buffer is recycled by the next step.  Returns
    the final position-space batch; raises NumericsError if any state's norm
    drifts by more than 1e-6.
    """
    dt = stepper.dt
    n_steps = stepper.n_steps
    shape_z = sauter_shape(grid.z, params)
    phase_unit = -1j * dt * shape_z  # exp(amp * phase_unit) is the potential factor
    worst = peak_depth(params, mode) * dt
    if worst > MAX_PHASE_PER_STEP:
        warnings.warn(
            f"potential phase per step {worst:.3g} rad exceeds {MAX_PHASE_PER_STEP}; "
            "results may lose second-order accuracy",
            stacklevel=2,
        )

    state = np.ascontiguousarray(states, dtype=np.complex128)
    if state.ndim != 3 or state.shape[0] != 2 or state.shape[2] != grid.n_points:
        raise ConfigError(f"batch must have shape (2, n_states, {grid.n_points})")
    half = _KineticOp(grid, c, 0.5 * dt, state.shape[1:])
    full = _KineticOp(grid, c, dt, state.shape[1:])
    snapshots = frozenset(snapshot_steps) if on_snapshot is not None else frozenset()
    norm0 = np.sqrt(np.sum(np.abs(state) ** 2, axis=(0, 2)) * grid.dz)

    state_k = sfft.fft(state, axis=-1, workers=fft_workers)
    if 0 in snapshots:
        on_snapshot(0, state_k)
    half.apply(state_k)
    offset = t_start + (0.5 if stepper.midpoint_sampling else 0.0) * dt
    for i in range(n_steps):
        state = sfft.ifft(state_k, axis=-1, workers=fft_workers, overwrite_x=True)
        state *= np.exp(time_amplitude(offset + i * dt, params, mode) * phase_unit)
        state_k = sfft.fft(state, axis=-1, workers=fft_workers, overwrite_x=True)
        if i == n_steps - 1 or (i + 1) in snapshots:
            half.apply(state_k)
            if (i + 1) in snapshots:
                on_snapshot(i + 1, state_k)
            if i < n_steps - 1:
                half.apply(state_k)
        else:
            full.apply(state_k)
    state = sfft.ifft(state_k, axis=-1, workers=fft_workers, overwrite_x=True)

    norm1 = np.sqrt(np.sum(np.abs(state) ** 2, axis=(0, 2)) * grid.dz)
    drift = float(np.max(np.abs(norm1 - norm0)))
    if drift > NORM_ABORT:
        raise NumericsError(f"norm drifted by {drift:.3e} (> {NORM_ABORT:.0e}) during evolution")
    return state


def evolve(
    field: SpinorField,
    params: WellParameters,
    stepper: StepperConfig,
    mode: str = "combined",
    c: float | None = None,
    basis: FreeModeBasis | None = None,
    t_start: float = 0.0,
) -> SpinorField:
    """Evolve a single field over [t_start, t_start + T]; see evolve_batch."""
    if basis is not None:
        _require_same_grid(field.grid, basis.grid)
        c_val = basis.c
    elif c is not None:
        c_val = c
    else:
        raise ConfigError("evolve needs either a basis or an explicit speed of light")
    out = evolve_batch(
        field.values[:, None, :], field.grid, c_val, params, stepper, mode, t_start=t_start
    )
    return SpinorField(values=out[:, 0, :], grid=field.grid)
