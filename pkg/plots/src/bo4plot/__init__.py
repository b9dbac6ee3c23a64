"""Offline figure generation from simulator output artifacts.

Consumes only the documented artifact formats (trajectory CSV, snapshot
manifest + binary, report JSON) — no imports from the simulator package —
and renders deterministic PNGs: identical inputs give byte-identical images.
"""

from .figures import energy_trace, loglog_fit, spectrum_waterfall
from .schemas import SchemaError

__version__ = "0.1.0"

__all__ = [
    "SchemaError",
    "energy_trace",
    "loglog_fit",
    "spectrum_waterfall",
    "__version__",
]
