"""Shared context handed to every node of a pipeline run."""

from dataclasses import dataclass
from typing import Generic, TypeVar

StateT = TypeVar("StateT")
DepsT = TypeVar("DepsT")


@dataclass
class GraphRunContext(Generic[StateT, DepsT]):
    """Mutable run state plus read-only dependencies."""

    state: StateT
    deps: DepsT | None = None
