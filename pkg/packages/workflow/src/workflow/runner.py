"""Pipeline execution over many independent states."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import Generic, TypeVar

from .graph import Graph, GraphRunResult
from .node import BaseNode
from .scheduler import Scheduler

StateT = TypeVar("StateT")
DepsT = TypeVar("DepsT")
RunEndT = TypeVar("RunEndT")

logger = logging.getLogger(__name__)


class WorkflowRunner(Generic[StateT, DepsT, RunEndT]):
    """Runs a graph over a batch of independent start states."""

    def __init__(self, max_parallel: int | None = None):
        self.scheduler = Scheduler(max_parallel=max_parallel)

    async def run_many(
        self,
        graph: Graph[StateT, DepsT, RunEndT],
        start_node: BaseNode[StateT, DepsT, RunEndT],
        states: Sequence[StateT],
        deps: DepsT | None = None,
    ) -> list[GraphRunResult[StateT, RunEndT] | Exception]:
        """
        Execute one pipeline per state, bounded by the scheduler.

        A failing pipeline does not cancel the others; its exception is
        returned in its slot.

        Args:
            graph: Workflow graph to execute
            start_node: Starting node shared by every run
            states: One initial state per run
            deps: Optional dependencies shared by every run

        Returns:
            Results or exceptions, in the order of ``states``
        """
        tasks = [
            graph.run(start_node, state=state, deps=deps) for state in states
        ]
        results = await self.scheduler.execute_tasks(
            tasks, return_exceptions=True
        )
        failed = sum(isinstance(r, Exception) for r in results)
        logger.info("run_many runs=%d failed=%d", len(results), failed)
        return results
