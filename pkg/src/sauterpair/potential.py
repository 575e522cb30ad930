"""Sauter well shape and the combined static + oscillating potential.

V(z, t) = sigma * (V_s + V_o*sin(omega*t)) * S(z) inside the pulse window
[0, T] (switching is abrupt; callers only evaluate inside the window).

The localized well shape is
    S(z) = (tanh((z + D/2)/W) - tanh((z - D/2)/W)) / 2,
a flat-bottom well of width D with edges of width W, S in [0, 1].  The
monotonic-step variant (sum of the two tanh terms) is kept behind
shape="step" for comparison runs; "well" is the default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import SPEED_OF_LIGHT

MODES = ("combined", "static_only", "oscillating_only")
SIGN_CONVENTIONS = ("as_printed", "negated")
SHAPES = ("well", "step")


@dataclass(frozen=True)
class WellParameters:
    """Physical knobs of the combined well, all in atomic units.

    static_depth:  V_s
    osc_depth:     V_o   (defaults to 1.47 c^2)
    frequency:     omega
    width:         D     (defaults to 10/c)
    edge_width:    W     (defaults to 0.3/c)
    sign_convention: "as_printed" (+V inside) or "negated"
    """

    static_depth: float = 0.0
    osc_depth: float = 1.47 * SPEED_OF_LIGHT**2
    frequency: float = 0.0
    width: float = 10.0 / SPEED_OF_LIGHT
    edge_width: float = 0.3 / SPEED_OF_LIGHT
    sign_convention: str = "as_printed"
    shape: str = "well"

    def __post_init__(self):
        if self.width <= 0 or self.edge_width <= 0:
            raise ConfigError("well width and edge width must be positive")
        if self.static_depth < 0 or self.osc_depth < 0 or self.frequency < 0:
            raise ConfigError("depths and frequency must be non-negative")
        if self.sign_convention not in SIGN_CONVENTIONS:
            raise ConfigError(f"sign_convention must be one of {SIGN_CONVENTIONS}")
        if self.shape not in SHAPES:
            raise ConfigError(f"shape must be one of {SHAPES}")

    @property
    def sign(self) -> float:
        return 1.0 if self.sign_convention == "as_printed" else -1.0


def sauter_shape(z, params: WellParameters):
    """Dimensionless well profile; S(0) ~ 1 for D >> W, S(+-inf) -> 0."""
    z = np.asarray(z, dtype=float)
    up = np.tanh((z + 0.5 * params.width) / params.edge_width)
    down = np.tanh((z - 0.5 * params.width) / params.edge_width)
    if params.shape == "step":
        return 0.5 * (up + down)
    return 0.5 * (up - down)


def time_amplitude(t: float, params: WellParameters, mode: str) -> float:
    """Signed depth multiplying S(z) at time t for the selected mode.

    "combined" is evaluated as static + oscillating term by term so that the
    mode-additivity invariant holds exactly in floating point.
    """
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")
    static = params.sign * params.static_depth
    oscillating = params.sign * (params.osc_depth * np.sin(params.frequency * t))
    if mode == "static_only":
        return static
    if mode == "oscillating_only":
        return oscillating
    return static + oscillating


def potential_at(z, t: float, params: WellParameters, mode: str = "combined"):
    """V(z, t) for the selected mode; combined == static_only + oscillating_only."""
    shape = sauter_shape(z, params)
    if mode == "combined":
        return (
            time_amplitude(t, params, "static_only") * shape
            + time_amplitude(t, params, "oscillating_only") * shape
        )
    return time_amplitude(t, params, mode) * shape


def peak_depth(params: WellParameters, mode: str = "combined") -> float:
    """max over t in [0, +inf) of |amplitude|; used by step-size guards."""
    if mode == "static_only":
        return params.static_depth
    if mode == "oscillating_only":
        return params.osc_depth
    return params.static_depth + params.osc_depth
