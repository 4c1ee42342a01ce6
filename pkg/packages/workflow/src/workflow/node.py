"""Pipeline nodes, the End marker and per-node timing records."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Generic, TypeVar

from .state import DepsT, GraphRunContext, StateT

RunEndT = TypeVar("RunEndT")


@dataclass
class End(Generic[RunEndT]):
    """Returned by the last node; ``data`` becomes the run output."""

    data: RunEndT | None = None


@dataclass
class NodeRecord:
    """Wall time of one executed node, and whether it raised."""

    node: str
    seconds: float
    failed: bool = False


@dataclass
class BaseNode(ABC, Generic[StateT, DepsT, RunEndT]):
    """A pipeline step. Fields carry what the previous step handed over."""

    @abstractmethod
    async def run(
        self, ctx: GraphRunContext[StateT, DepsT]
    ) -> BaseNode[StateT, DepsT, RunEndT] | End[RunEndT]:
        """
        Do this step's work on ``ctx.state`` and pick the successor.

        Args:
            ctx: Shared state and dependencies of the run

        Returns:
            The node to run next, or End with the run output
        """
        ...

    @property
    def name(self) -> str:
        return type(self).__name__

    def __repr__(self) -> str:
        return f"{self.name}()"
