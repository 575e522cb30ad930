"""Batch figure rendering for sauterpair CSV outputs.

Consumes only the public CSV schemas (sweep, spectrum, density); no
in-process coupling to the simulator.
"""

__version__ = "0.1.0"
