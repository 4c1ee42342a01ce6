"""Configuration and artifact schemas for self-similar profile runs."""

from .config import SolverConfig
from .models import (
    SCHEMA_VERSION,
    Artifact,
    CheckReport,
    CheckResult,
    ErrorInfo,
    GProfileSummary,
    InterfaceDiagnostics,
    IterationReport,
    IterationStep,
    NodeTiming,
    NormReport,
    RunRecord,
    RunStatusName,
    SolverReport,
    SweepEntry,
    SweepRecord,
    UResiduals,
)

__all__ = [
    "SCHEMA_VERSION",
    "Artifact",
    "CheckReport",
    "CheckResult",
    "ErrorInfo",
    "GProfileSummary",
    "InterfaceDiagnostics",
    "IterationReport",
    "IterationStep",
    "NodeTiming",
    "NormReport",
    "RunRecord",
    "RunStatusName",
    "SolverConfig",
    "SolverReport",
    "SweepEntry",
    "SweepRecord",
    "UResiduals",
]
