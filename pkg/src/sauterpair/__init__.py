"""Electron-positron pair creation in combined static + oscillating Sauter wells.

A 1D two-component Dirac field is evolved through the pulse with a
split-operator spectral method; Bogoliubov overlaps of the evolved
negative-energy basis with the free positive-energy modes give pair counts,
spatial densities, and gain numbers, plus bound-state spectra of the static
well and parameter sweeps over depth and frequency.
"""

__version__ = "0.1.0"

from .config import RunConfig, parse_config, render_config
from .errors import ConfigError, NumericsError
from .grid import (
    SPEED_OF_LIGHT,
    FreeModeBasis,
    NumericalGrid,
    SpinorField,
    build_free_basis,
    build_grid,
    project_onto_modes,
    synthesize,
)
from .observables import (
    BogoliubovMatrix,
    GainResult,
    PairObservables,
    electron_density,
    gain_number,
    positron_count,
    run_simulation,
)
from .potential import WellParameters, potential_at, sauter_shape
from .propagator import StepperConfig, evolve, kinetic_half_step, potential_step
from .spectrum import SpectrumCurve, assemble_hamiltonian, bound_spectrum, critical_depth, spectrum_sweep
from .sweep import SweepAxis, SweepPlan, SweepRecord, find_optimum, read_sweep_csv, run_sweep, write_sweep_csv

__all__ = [
    "__version__",
    "BogoliubovMatrix",
    "ConfigError",
    "FreeModeBasis",
    "GainResult",
    "NumericalGrid",
    "NumericsError",
    "PairObservables",
    "RunConfig",
    "SPEED_OF_LIGHT",
    "SpectrumCurve",
    "SpinorField",
    "StepperConfig",
    "SweepAxis",
    "SweepPlan",
    "SweepRecord",
    "WellParameters",
    "assemble_hamiltonian",
    "bound_spectrum",
    "build_free_basis",
    "build_grid",
    "critical_depth",
    "electron_density",
    "evolve",
    "find_optimum",
    "gain_number",
    "kinetic_half_step",
    "parse_config",
    "positron_count",
    "potential_at",
    "potential_step",
    "project_onto_modes",
    "read_sweep_csv",
    "render_config",
    "run_simulation",
    "run_sweep",
    "sauter_shape",
    "spectrum_sweep",
    "synthesize",
    "write_sweep_csv",
]
