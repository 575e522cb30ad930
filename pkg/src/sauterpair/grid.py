"""Periodic position/momentum grids and the field-free Dirac mode basis.

Everything downstream (propagation, Bogoliubov projections, spectra) lives on
the periodic box [-L/2, L/2) sampled at N_z points.  Momenta are the FFT bins
p_k = 2*pi*k/L, kept in numpy FFT ordering so that projections are plain FFTs.

Conventions (atomic units, two-component spinors):
    H0(p) = [[c^2, c p], [c p, -c^2]]          (c*sigma1*p + sigma3*c^2)
    u_p(z) = (a_p, b_p)^T  e^{ipz}/sqrt(L)     energy +E_p
    v_p(z) = (-b_p, a_p)^T e^{ipz}/sqrt(L)     energy -E_p
with E_p = sqrt(c^4 + c^2 p^2), a_p = sqrt((E_p+c^2)/(2E_p)),
b_p = c*p / sqrt(2 E_p (E_p + c^2)).

Because z_0 = -L/2, the plane wave e^{ip_k z_j} equals (-1)^k e^{2pi i kj/N};
the (-1)^k factors below carry that half-box offset through the FFTs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

SPEED_OF_LIGHT = 137.036  # a.u.


def mode_energy(p, c: float = SPEED_OF_LIGHT):
    """Free-particle energy sqrt(c^4 + c^2 p^2); scalar or array p."""
    return np.sqrt(c**4 + c**2 * np.asarray(p, dtype=float) ** 2)


def spinor_amplitudes(p, c: float = SPEED_OF_LIGHT):
    """Closed-form spinor components (a_p, b_p) of the positive-energy mode.

    a_p^2 + b_p^2 = 1; the negative-energy mode is (-b_p, a_p).
    """
    p = np.asarray(p, dtype=float)
    energy = mode_energy(p, c)
    a = np.sqrt((energy + c**2) / (2.0 * energy))
    b = c * p / np.sqrt(2.0 * energy * (energy + c**2))
    return a, b


@dataclass(frozen=True)
class NumericalGrid:
    """Immutable periodic grid: positions z_j and FFT-ordered momenta p_k."""

    length: float
    n_points: int
    dz: float = field(init=False)
    z: np.ndarray = field(init=False, repr=False)
    p: np.ndarray = field(init=False, repr=False)
    k_index: np.ndarray = field(init=False, repr=False)  # signed FFT bin integers

    def __post_init__(self):
        dz = self.length / self.n_points
        z = -0.5 * self.length + dz * np.arange(self.n_points)
        k = np.fft.fftfreq(self.n_points, d=1.0 / self.n_points)  # 0,1,..,-N/2,..,-1
        p = 2.0 * np.pi * k / self.length
        for name, arr in (("z", z), ("p", p), ("k_index", k.astype(int))):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "dz", dz)

    def __eq__(self, other):
        if not isinstance(other, NumericalGrid):
            return NotImplemented
        return self.length == other.length and self.n_points == other.n_points

    def __hash__(self):
        return hash((self.length, self.n_points))


def build_grid(length: float = 1.2, n_points: int = 256) -> NumericalGrid:
    if length <= 0:
        raise ConfigError(f"box length must be positive, got {length}")
    if n_points < 8 or n_points % 2 != 0:
        raise ConfigError(f"n_points must be an even integer >= 8, got {n_points}")
    return NumericalGrid(length=float(length), n_points=int(n_points))


@dataclass(frozen=True)
class SpinorField:
    """Two-component field on a grid; values has shape (2, N_z).

    Normalization convention: sum_j |psi_j|^2 * dz  (both components).
    """

    values: np.ndarray
    grid: NumericalGrid

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (2, self.grid.n_points):
            raise ConfigError(f"spinor values must have shape (2, {self.grid.n_points})")
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dz))

    def inner(self, other: "SpinorField") -> complex:
        _require_same_grid(self.grid, other.grid)
        return complex(np.sum(np.conj(self.values) * other.values) * self.grid.dz)


@dataclass(frozen=True)
class FreeModeBasis:
    """Free Dirac eigenmodes on a grid, optionally truncated by an energy cutoff.

    Arrays are aligned: retained[i] is the FFT bin of momentum p[i], with
    spinor amplitudes (a[i], b[i]) and energy energy[i].  Without a cutoff,
    retained == arange(N_z) and the basis is complete.
    """

    grid: NumericalGrid
    c: float
    retained: np.ndarray  # FFT-bin indices of retained momenta
    p: np.ndarray
    energy: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for arr in (self.retained, self.p, self.energy, self.a, self.b):
            arr.flags.writeable = False

    @property
    def n_modes(self) -> int:
        return len(self.retained)

    @property
    def is_complete(self) -> bool:
        return self.n_modes == self.grid.n_points

    def plane_waves(self) -> np.ndarray:
        """e^{i p z} / sqrt(L) for every retained momentum; shape (n_modes, N_z)."""
        return np.exp(1j * np.outer(self.p, self.grid.z)) / np.sqrt(self.grid.length)

    def positive_modes(self) -> np.ndarray:
        """u_p on the grid, component-major; shape (2, n_modes, N_z)."""
        waves = self.plane_waves()
        return np.stack([self.a[:, None] * waves, self.b[:, None] * waves], axis=0)

    def negative_modes(self) -> np.ndarray:
        """v_p on the grid, component-major; shape (2, n_modes, N_z)."""
        waves = self.plane_waves()
        return np.stack([-self.b[:, None] * waves, self.a[:, None] * waves], axis=0)


def build_free_basis(
    grid: NumericalGrid, c: float = SPEED_OF_LIGHT, cutoff: float | None = None
) -> FreeModeBasis:
    """One positive and one negative mode per grid momentum with E_p <= cutoff."""
    if c <= 0:
        raise ConfigError(f"speed of light must be positive, got {c}")
    if cutoff is not None and cutoff < c**2:
        raise ConfigError(f"cutoff {cutoff} would drop every mode (min energy {c**2})")
    energy = mode_energy(grid.p, c)
    retained = np.arange(grid.n_points) if cutoff is None else np.flatnonzero(energy <= cutoff)
    p = grid.p[retained].copy()
    a, b = spinor_amplitudes(p, c)
    return FreeModeBasis(
        grid=grid, c=c, retained=retained.copy(), p=p, energy=energy[retained].copy(), a=a, b=b
    )


def _require_same_grid(g1: NumericalGrid, g2: NumericalGrid):
    if g1 != g2:
        raise ConfigError(
            f"grid mismatch: (L={g1.length}, N={g1.n_points}) vs (L={g2.length}, N={g2.n_points})"
        )


def _fft_sign(grid: NumericalGrid) -> np.ndarray:
    """(-1)^k per FFT bin: the phase of e^{ip_k z} at z_0 = -L/2."""
    return 1.0 - 2.0 * (np.abs(grid.k_index) % 2).astype(float)


def project_batch(values: np.ndarray, basis: FreeModeBasis, from_momentum: bool = False):
    """Mode coefficients of a batch of spinor fields.

    values: component-major (2, n_states, N_z), position space unless
    from_momentum (then raw FFT-layout momentum amplitudes).  Returns
    (c_plus, c_minus), each (n_states, n_modes): c_plus = <u_p|field>,
    c_minus = <v_p|field>.
    """
    grid = basis.grid
    fk = values if from_momentum else np.fft.fft(values, axis=-1)
    pref = _fft_sign(grid) * np.sqrt(grid.length) / grid.n_points
    up = (pref * fk[0])[:, basis.retained]
    lo = (pref * fk[1])[:, basis.retained]
    c_plus = basis.a * up + basis.b * lo
    c_minus = -basis.b * up + basis.a * lo
    return c_plus, c_minus


def synthesize_batch(c_plus: np.ndarray, c_minus: np.ndarray, basis: FreeModeBasis) -> np.ndarray:
    """Inverse of project_batch: fields (2, n_states, N_z) from mode coefficients."""
    grid = basis.grid
    n_states = c_plus.shape[0]
    gk = np.zeros((2, n_states, grid.n_points), dtype=np.complex128)
    gk[0][:, basis.retained] = basis.a * c_plus - basis.b * c_minus
    gk[1][:, basis.retained] = basis.b * c_plus + basis.a * c_minus
    gk *= _fft_sign(grid) * grid.n_points / np.sqrt(grid.length)
    return np.fft.ifft(gk, axis=-1)


def project_onto_modes(field: SpinorField, basis: FreeModeBasis):
    """Coefficients (c_plus, c_minus) of a single field, each shape (n_modes,)."""
    _require_same_grid(field.grid, basis.grid)
    c_plus, c_minus = project_batch(field.values[:, None, :], basis)
    return c_plus[0], c_minus[0]


def synthesize(c_plus: np.ndarray, c_minus: np.ndarray, basis: FreeModeBasis) -> SpinorField:
    values = synthesize_batch(c_plus[None, :], c_minus[None, :], basis)[:, 0, :]
    return SpinorField(values=values, grid=basis.grid)
