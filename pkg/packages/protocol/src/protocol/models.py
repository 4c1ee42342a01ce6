"""Pydantic models for run artifacts and solver reports."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from .config import SolverConfig

SCHEMA_VERSION = 1

RunStatusName = Literal[
    "converged",
    "no_convergence",
    "contraction_failure",
    "rejected",
    "failed",
    "checks_failed",
]


class Artifact(BaseModel):
    """Base for JSON artifacts; serializes a ``"schema"`` version key."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class NormReport(BaseModel):
    """Components of the X-norm of a decaying field."""

    l2w: float = Field(ge=0.0, description="||v||_{L^2_w}")
    xl2w: float = Field(ge=0.0, description="||x v_x||_{L^2_w}")
    h1: float = Field(ge=0.0, description="||v||_{H^1} (homogeneous)")
    h3: float = Field(ge=0.0, description="||v||_{H^3} (homogeneous)")
    xnorm: float = Field(ge=0.0, description="Sum of the four components")

    @classmethod
    def from_components(
        cls, l2w: float, xl2w: float, h1: float, h3: float
    ) -> "NormReport":
        return cls(l2w=l2w, xl2w=xl2w, h1=h1, h3=h3, xnorm=l2w + xl2w + h1 + h3)


class IterationStep(BaseModel):
    """One Picard step."""

    step: int
    xnorm: float
    delta: float = Field(description="||v_{n+1} - v_n||_X")
    ratio: float | None = Field(
        default=None, description="delta_n / delta_{n-1}, from step 2 on"
    )
    residual: float = Field(description="Normalized self-similar residual")
    relaxation: float = 1.0


class IterationReport(BaseModel):
    """History of a Picard run."""

    steps: list[IterationStep] = Field(default_factory=list)
    converged: bool = False
    wall_time: float = 0.0
    fallback_used: bool = False
    warnings: list[str] = Field(default_factory=list)

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    @property
    def ratios(self) -> list[float]:
        return [s.ratio for s in self.steps if s.ratio is not None]


class SolverReport(BaseModel):
    """Linear solve summary: {delta, residual, K, condition, norms}."""

    delta: float
    residual: float
    K_estimate: float | None = None
    condition_estimate: float | None = None
    norms: NormReport | None = None


class CheckResult(BaseModel):
    """Outcome of one numeric spot-check of an analytic claim."""

    name: str
    claim: str = Field(description="Bound the measured value is held to")
    claim_ref: str = Field(
        default="", description="Result of the construction being tested"
    )
    measured: float
    threshold: float
    passed: bool
    detail: str = ""


class CheckReport(Artifact):
    """checks.json payload."""

    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


class GProfileSummary(Artifact):
    """gprofile.json payload."""

    epsilon: float
    a: float
    n_points: int
    half_width: float
    integral_Gx: float
    oddness: float = Field(description="max |G(x) + G(-x)|")
    G_limits: tuple[float, float]
    C_const: float
    C_growth: float
    sup_x_iHGx: float = Field(description="sup |x iH G_x|")
    linearized_residual: float
    weight_bound_constant: float = Field(
        description="max |w|^(+-1) (1+x^2)^(-1/1000)"
    )
    decay_envelopes: dict[str, float] = Field(default_factory=dict)


class UResiduals(BaseModel):
    sup_norm: float
    l2_norm: float
    im_sup: float
    re_sup: float
    xfx_limit: float = Field(description="|x f_x - 2 epsilon/pi| at x ~ L/2")


class InterfaceDiagnostics(Artifact):
    """diagnostics.json payload."""

    epsilon: float
    a: float
    angle_plus: float
    angle_minus: float
    power_fit: float
    xfx: float = Field(description="x f_x at the node nearest L/2")
    antiderivative_error: float
    holomorphy_defect: float
    selfsimilar_residual: float
    smoothness_tail: float
    U: UResiduals


class ErrorInfo(BaseModel):
    type: str
    message: str


class NodeTiming(BaseModel):
    node: str
    seconds: float


class RunRecord(Artifact):
    """run.json payload."""

    config: SolverConfig
    status: RunStatusName
    error: ErrorInfo | None = None
    iteration: IterationReport | None = None
    norms: NormReport | None = None
    residuals: dict[str, float] = Field(default_factory=dict)
    solver: SolverReport | None = None
    pipeline: list[NodeTiming] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)


class SweepEntry(BaseModel):
    epsilon: float
    status: RunStatusName
    run_dir: str
    xnorm: float | None = None
    xnorm_over_eps: float | None = None
    xnorm_over_eps2: float | None = None
    source_over_eps2: float | None = None
    steps: int | None = None
    max_ratio: float | None = None
    angle_plus: float | None = None
    angle_minus: float | None = None
    power_fit: float | None = None
    error: ErrorInfo | None = None


class SweepRecord(Artifact):
    """sweep.json payload."""

    entries: list[SweepEntry] = Field(default_factory=list)
    response_exponent: float | None = Field(
        default=None, description="log-log slope of ||v||_X against epsilon"
    )
