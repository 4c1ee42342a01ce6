"""Exceptions raised while building and solving self-similar profiles."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from protocol import IterationReport


class QuadratureFailure(RuntimeError):
    """A Fourier integral did not settle under panel refinement."""


class ConsistencyFailure(RuntimeError):
    """Two independent evaluations of the same quantity disagree."""


class SingularSystem(RuntimeError):
    """The assembled linear system has a pivot below threshold."""


class BoundViolation(ValueError):
    """A quantity left an interval an analytic bound guarantees."""


class EpsilonRejected(ValueError):
    """epsilon violates a hard admissibility condition."""


class NoConvergence(RuntimeError):
    """An iteration hit its step limit; ``report`` holds the history."""

    def __init__(
        self, message: str, report: IterationReport | None = None
    ) -> None:
        super().__init__(message)
        self.report = report


class ContractionFailure(NoConvergence):
    """Picard step ratios stayed >= 1 even after under-relaxation."""
