"""Band-limited operators for decaying functions on the real line."""

from .errors import (
    GridMismatch,
    InsufficientPadding,
    NonDecayingInput,
    NonFiniteData,
    NonIntegrableTail,
)
from .field import Decay, DecayKind, Field
from .grid import Grid
from .io import read_binary, read_csv, write_binary, write_csv
from .operators import (
    derivative,
    fractional_D,
    hilbert,
    hilbert_derivative,
    ihilbert,
    sobolev_seminorm,
    taper,
    taper_window,
)
from .quadrature import cumulative_from_right, integrate

__all__ = [
    "Decay",
    "DecayKind",
    "Field",
    "Grid",
    "GridMismatch",
    "InsufficientPadding",
    "NonDecayingInput",
    "NonFiniteData",
    "NonIntegrableTail",
    "cumulative_from_right",
    "derivative",
    "fractional_D",
    "hilbert",
    "hilbert_derivative",
    "ihilbert",
    "integrate",
    "read_binary",
    "read_csv",
    "sobolev_seminorm",
    "taper",
    "taper_window",
    "write_binary",
    "write_csv",
]
