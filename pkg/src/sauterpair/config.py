"""Run configuration: defaults, key=value round-tripping, and object builders.

Energies (depths, frequency, cutoff) are configured in units of c^2 and
converted to atomic units when physics objects are built.  The default set
reproduces the characteristic setup: c = 137.036, L = 1.2, T = 0.002,
V_o = 1.47 c^2, D = 10/c, W = 0.3/c.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields, replace

from .errors import ConfigError
from .grid import SPEED_OF_LIGHT, FreeModeBasis, NumericalGrid, build_free_basis, build_grid
from .potential import MODES, SHAPES, SIGN_CONVENTIONS, WellParameters
from .propagator import StepperConfig

FAST_GRID_POINTS = 128
FAST_DT = 2e-7


@dataclass(frozen=True)
class RunConfig:
    """Flat bag of every knob a run needs; see module docstring for units."""

    c: float = SPEED_OF_LIGHT
    box_length: float = 1.2
    grid_points: int = 256
    dt: float = 1e-7
    total_time: float = 0.002
    vs_c2: float = 0.0
    vo_c2: float = 1.47
    omega_c2: float = 0.0
    well_width: float = -1.0  # a.u.; -1 resolves to 10/c
    edge_width: float = -1.0  # a.u.; -1 resolves to 0.3/c
    cutoff_c2: float = 0.0  # 0 disables the momentum cutoff
    mode: str = "combined"
    shape: str = "well"
    sign_convention: str = "as_printed"
    series_points: int = 21
    workers: int = 1
    fast: bool = False
    output_dir: str = "."

    def __post_init__(self):
        if self.well_width <= 0 and self.well_width != -1.0:
            raise ConfigError("well_width must be positive (or -1 for the default 10/c)")
        if self.edge_width <= 0 and self.edge_width != -1.0:
            raise ConfigError("edge_width must be positive (or -1 for the default 0.3/c)")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.shape not in SHAPES:
            raise ConfigError(f"shape must be one of {SHAPES}")
        if self.sign_convention not in SIGN_CONVENTIONS:
            raise ConfigError(f"sign_convention must be one of {SIGN_CONVENTIONS}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.series_points < 2:
            raise ConfigError("series_points must be >= 2")

    # -- resolved physical values (a.u.) ------------------------------------
    @property
    def c2(self) -> float:
        return self.c**2

    @property
    def well_width_au(self) -> float:
        return 10.0 / self.c if self.well_width == -1.0 else self.well_width

    @property
    def edge_width_au(self) -> float:
        return 0.3 / self.c if self.edge_width == -1.0 else self.edge_width

    # -- builders ------------------------------------------------------------
    def make_grid(self) -> NumericalGrid:
        return build_grid(self.box_length, self.grid_points)

    def make_basis(self, grid: NumericalGrid | None = None) -> FreeModeBasis:
        grid = grid if grid is not None else self.make_grid()
        cutoff = None if self.cutoff_c2 == 0.0 else self.cutoff_c2 * self.c2
        return build_free_basis(grid, self.c, cutoff)

    def make_stepper(self) -> StepperConfig:
        return StepperConfig(dt=self.dt, total_time=self.total_time)

    def make_well(self, vs_c2: float | None = None, omega_c2: float | None = None) -> WellParameters:
        vs = self.vs_c2 if vs_c2 is None else vs_c2
        om = self.omega_c2 if omega_c2 is None else omega_c2
        return WellParameters(
            static_depth=vs * self.c2,
            osc_depth=self.vo_c2 * self.c2,
            frequency=om * self.c2,
            width=self.well_width_au,
            edge_width=self.edge_width_au,
            sign_convention=self.sign_convention,
            shape=self.shape,
        )

    def with_fast_preset(self) -> "RunConfig":
        if not self.fast:
            return self
        return replace(self, grid_points=FAST_GRID_POINTS, dt=FAST_DT)

    def numerics_digest(self) -> str:
        """Hash of everything that affects simulation results except the scan axes."""
        keys = (
            "c", "box_length", "grid_points", "dt", "total_time", "vo_c2",
            "well_width", "edge_width", "cutoff_c2", "shape", "sign_convention",
        )
        text = "\n".join(f"{k}={getattr(self, k)!r}" for k in keys)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


_BOOL_TRUE = {"true", "1", "yes", "on"}
_BOOL_FALSE = {"false", "0", "no", "off"}


def render_config(config: RunConfig) -> str:
    """Flat key=value text, one field per line, field order."""
    lines = [f"{f.name}={getattr(config, f.name)}" for f in fields(RunConfig)]
    return "\n".join(lines) + "\n"


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse key=value lines (comments with '#', blank lines ignored) over base."""
    base = base if base is not None else RunConfig()
    by_name = {f.name: f for f in fields(RunConfig)}
    updates = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in by_name:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        updates[key] = _coerce(key, value, by_name[key].type)
    return replace(base, **updates)


def _coerce(key: str, value: str, annotation):
    kind = annotation if isinstance(annotation, str) else getattr(annotation, "__name__", "str")
    try:
        if kind == "bool":
            low = value.lower()
            if low in _BOOL_TRUE:
                return True
            if low in _BOOL_FALSE:
                return False
            raise ValueError(value)
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        return value
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: cannot parse {value!r} as {kind}") from exc
