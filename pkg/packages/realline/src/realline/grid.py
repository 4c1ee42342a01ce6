"""Truncated uniform discretization of the real line."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InsufficientPadding


@dataclass(frozen=True)
class Grid:
    """Uniform grid x_j = -L + j*h on [-L, L) with a zero-padding multiple.

    The pad factor sets the FFT length used for linear convolutions,
    ``pad_factor * n_points``. Band-limited operators need at least
    ``2 * n_points - 1`` samples to avoid wrap-around, so transforms
    require ``pad_factor >= 2``.
    """

    half_width: float
    n_points: int
    pad_factor: int = 4

    def __post_init__(self) -> None:
        if self.n_points < 16 or self.n_points % 2:
            raise ValueError(
                f"n_points must be even and >= 16, got {self.n_points}"
            )
        if not self.half_width > 0:
            raise ValueError(
                f"half_width must be positive, got {self.half_width}"
            )
        if self.pad_factor < 1:
            raise ValueError(
                f"pad_factor must be >= 1, got {self.pad_factor}"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @cached_property
    def nodes(self) -> np.ndarray:
        x = -self.half_width + self.spacing * np.arange(self.n_points)
        x.flags.writeable = False
        return x

    @property
    def padded_size(self) -> int:
        return self.pad_factor * self.n_points

    def require_padding(self, operation: str) -> None:
        if self.pad_factor < 2:
            raise InsufficientPadding(
                f"{operation} needs pad_factor >= 2, got {self.pad_factor}"
            )

    def frequencies(self) -> np.ndarray:
        """Angular frequencies of the padded real FFT."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.padded_size, self.spacing)

    def inner_mask(self, fraction: float = 0.5) -> np.ndarray:
        """Boolean mask of nodes with |x| <= fraction * L."""
        return np.abs(self.nodes) <= fraction * self.half_width

    def window(self, lower: float, upper: float) -> np.ndarray:
        """Boolean mask of nodes with lower <= x <= upper."""
        x = self.nodes
        return (x >= lower) & (x <= upper)

    def nearest_index(self, x: float) -> int:
        return int(np.argmin(np.abs(self.nodes - x)))

    def refined(self) -> Grid:
        """Same domain with twice the resolution; coarse nodes are kept."""
        return Grid(self.half_width, 2 * self.n_points, self.pad_factor)
