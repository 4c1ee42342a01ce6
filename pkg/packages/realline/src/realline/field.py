"""Sampled functions on a grid, tagged with their decay class."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import GridMismatch, NonDecayingInput, NonFiniteData
from .grid import Grid


class DecayKind(str, Enum):
    """How fast a field falls off at |x| -> infinity."""

    SCHWARTZ_LIKE = "schwartz_like"
    ALGEBRAIC = "algebraic"
    BOUNDED_NONDECAYING = "bounded_nondecaying"


@dataclass(frozen=True)
class Decay:
    """Decay tag. ``algebraic(p)`` means |f| <~ (1+x^2)^(-p/2)."""

    kind: DecayKind
    exponent: float = math.inf

    @classmethod
    def schwartz_like(cls) -> Decay:
        return cls(DecayKind.SCHWARTZ_LIKE, math.inf)

    @classmethod
    def algebraic(cls, exponent: float) -> Decay:
        if exponent <= 0:
            return cls.bounded_nondecaying()
        return cls(DecayKind.ALGEBRAIC, float(exponent))

    @classmethod
    def bounded_nondecaying(cls) -> Decay:
        return cls(DecayKind.BOUNDED_NONDECAYING, 0.0)

    @property
    def is_decaying(self) -> bool:
        return self.kind is not DecayKind.BOUNDED_NONDECAYING

    def weakest(self, other: Decay) -> Decay:
        """Conservative tag for a combination of two fields."""
        if self.exponent <= other.exponent:
            return self
        return other

    def capped(self, exponent: float) -> Decay:
        """Tag limited to at most the given algebraic exponent."""
        if self.exponent <= exponent:
            return self
        return Decay.algebraic(exponent)

    def __str__(self) -> str:
        if self.kind is DecayKind.ALGEBRAIC:
            return f"algebraic({self.exponent:g})"
        return self.kind.value


@dataclass(frozen=True, eq=False)
class Field:
    """Immutable samples of a real or complex function on a grid."""

    grid: Grid
    values: np.ndarray
    decay: Decay = field(default_factory=Decay.schwartz_like)

    def __post_init__(self) -> None:
        values = np.array(self.values, copy=True)
        if not np.iscomplexobj(values):
            values = values.astype(float)
        if values.shape != (self.grid.n_points,):
            raise GridMismatch(
                f"expected {self.grid.n_points} samples, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteData("field contains NaN or infinite samples")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def real(self) -> Field:
        return Field(self.grid, self.values.real, self.decay)

    @property
    def imag(self) -> Field:
        return Field(self.grid, self.values.imag, self.decay)

    def with_values(
        self, values: np.ndarray, decay: Decay | None = None
    ) -> Field:
        """New field on the same grid, keeping the tag unless given."""
        return Field(self.grid, values, self.decay if decay is None else decay)

    def l2_norm(self) -> float:
        """Discrete L^2 norm sqrt(h * sum |f|^2)."""
        return float(
            np.sqrt(self.grid.spacing * np.sum(np.abs(self.values) ** 2))
        )

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def require_decaying(self, operation: str) -> None:
        if not self.decay.is_decaying:
            raise NonDecayingInput(
                f"{operation} needs a decaying field, got {self.decay}"
            )

    def require_same_grid(self, other: Field) -> None:
        if self.grid != other.grid:
            raise GridMismatch(
                f"grids differ: {self.grid} vs {other.grid}"
            )

    def __repr__(self) -> str:
        kind = "real" if self.is_real else "complex"
        return (
            f"Field({kind}, N={self.grid.n_points}, "
            f"L={self.grid.half_width:g}, decay={self.decay})"
        )
