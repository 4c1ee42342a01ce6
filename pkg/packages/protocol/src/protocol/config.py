"""Solver configuration shared by the library and the command line."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator


class SolverConfig(BaseModel):
    """Parameters of one self-similar profile run. Unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")

    epsilon: float = Field(
        default=0.01,
        ge=-1.0,
        le=1.0,
        description="Corner perturbation; the wedge angle is pi + 2*epsilon",
    )
    n_points: int = Field(
        default=4096, ge=16, le=16384, description="Grid size N (even)"
    )
    half_width: float = Field(
        default=200.0, gt=0.0, description="Truncation half-width L"
    )
    pad_factor: int = Field(
        default=4,
        ge=2,
        le=16,
        description="Zero-padding multiple for FFT convolutions",
    )
    delta: float = Field(
        default=0.0,
        ge=0.0,
        description="Strength of the -d/dx(w x^2 d/dx) regularization",
    )
    tol: float = Field(
        default=1e-10, gt=0.0, description="Absolute X-norm step tolerance"
    )
    tol_rel: float = Field(
        default=0.0, ge=0.0, description="Relative X-norm step tolerance"
    )
    max_iter: int = Field(
        default=50, ge=1, le=10000, description="Picard iteration limit"
    )
    relaxation: float = Field(
        default=1.0,
        gt=0.0,
        le=1.0,
        description="Under-relaxation theta in v <- (1-theta) v + theta v_new",
    )
    output_dir: str = Field(
        default="runs", description="Directory that receives run artifacts"
    )
    times: list[float] = Field(
        default_factory=lambda: [0.1, 1.0],
        description="Times t at which Z(., t) is plotted",
    )
    seed: int = Field(
        default=0, ge=0, description="Seed for randomized test fields"
    )
    epsilon_cap: float = Field(
        default=0.05,
        gt=0.0,
        description="|epsilon| above this is run with a recorded warning",
    )
    smallness_cap: float = Field(
        default=1.0,
        gt=0.0,
        description="Warn when an iterate's X-norm reaches this value",
    )
    consistency_tol: float = Field(
        default=1e-4,
        gt=0.0,
        description="Tolerance of the interface antiderivative check",
    )
    solve_method: Literal["lu", "gmres"] = Field(
        default="lu", description="Dense LU or matrix-free GMRES"
    )

    @field_validator("n_points")
    @classmethod
    def _even_n_points(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f"n_points must be even, got {value}")
        return value

    @field_validator("times")
    @classmethod
    def _nonnegative_times(cls, value: list[float]) -> list[float]:
        if any(t < 0 for t in value):
            raise ValueError("times must be non-negative")
        return value
