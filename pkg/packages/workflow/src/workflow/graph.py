"""Pipelines as graphs of async nodes, with per-node timing."""

from __future__ import annotations

import logging
import time
from collections.abc import AsyncIterator, Sequence
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import Generic, TypeVar

from .node import BaseNode, End, NodeRecord
from .state import DepsT, GraphRunContext, StateT

RunEndT = TypeVar("RunEndT")

Step = BaseNode[StateT, DepsT, RunEndT] | End[RunEndT]

DEFAULT_MAX_STEPS = 10_000

logger = logging.getLogger(__name__)


@dataclass
class GraphRunResult(Generic[StateT, RunEndT]):
    """Output of the End node, the final state and the executed nodes."""

    output: RunEndT | None
    state: StateT
    history: list[NodeRecord] = field(default_factory=list)

    @property
    def seconds(self) -> float:
        return sum(r.seconds for r in self.history)


class GraphRun(Generic[StateT, DepsT, RunEndT]):
    """One pass through a graph.

    Async iteration yields the start node, then whatever each node hands
    over to, ending with the End node. ``history`` keeps one record per
    executed node, including one that raised.
    """

    def __init__(
        self,
        graph: Graph[StateT, DepsT, RunEndT],
        start_node: BaseNode[StateT, DepsT, RunEndT],
        state: StateT,
        deps: DepsT | None = None,
    ):
        self.graph = graph
        self.state = state
        self.deps = deps
        self.history: list[NodeRecord] = []
        self.result: GraphRunResult[StateT, RunEndT] | None = None
        self._pending: Step = start_node
        self._started = False

    async def __aenter__(self) -> GraphRun[StateT, DepsT, RunEndT]:
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb) -> None:
        return None

    def __aiter__(self) -> AsyncIterator[Step]:
        return self

    async def __anext__(self) -> Step:
        if not self._started:
            self._started = True
            return self._pending
        if self.finished:
            raise StopAsyncIteration
        return await self.next()

    @property
    def finished(self) -> bool:
        return isinstance(self._pending, End)

    @property
    def seconds(self) -> float:
        return sum(r.seconds for r in self.history)

    async def next(
        self, node: BaseNode[StateT, DepsT, RunEndT] | None = None
    ) -> Step:
        """
        Run ``node`` (default: the pending node) and return its successor.

        Raises:
            TypeError: If ``node`` is not a BaseNode.
            ValueError: If the node's class is not part of the graph.
            RuntimeError: If the run exceeds the graph's step limit.
        """
        if node is None:
            if self.finished:
                return self._pending
            node = self._pending
        if not isinstance(node, BaseNode):
            raise TypeError(f"expected a BaseNode instance, got {node!r}")
        if type(node) not in self.graph:
            raise ValueError(f"Node `{node}` is not in the graph.")
        if len(self.history) >= self.graph.max_steps:
            raise RuntimeError(
                f"graph={self.graph.label} exceeded max_steps="
                f"{self.graph.max_steps}"
            )

        ctx = GraphRunContext(state=self.state, deps=self.deps)
        started = time.perf_counter()
        try:
            successor = await node.run(ctx)
        except Exception:
            self._record(node, started, failed=True)
            raise
        self._record(node, started)

        self.state = ctx.state
        self._pending = successor
        if isinstance(successor, End):
            self.result = GraphRunResult(
                output=successor.data,
                state=self.state,
                history=list(self.history),
            )
        return successor

    def _record(
        self, node: BaseNode, started: float, failed: bool = False
    ) -> None:
        record = NodeRecord(node.name, time.perf_counter() - started, failed)
        self.history.append(record)
        if failed:
            logger.warning(
                "node=%s failed after %.3fs", record.node, record.seconds
            )
        else:
            logger.debug("node=%s seconds=%.3f", record.node, record.seconds)


class Graph(Generic[StateT, DepsT, RunEndT]):
    """A fixed set of node classes that may hand over to each other."""

    def __init__(
        self,
        *,
        nodes: Sequence[type[BaseNode[StateT, DepsT, RunEndT]]],
        name: str | None = None,
        max_steps: int = DEFAULT_MAX_STEPS,
    ):
        """
        Args:
            nodes: Node classes the graph may run
            name: Label used in log lines
            max_steps: Node executions allowed per run

        Raises:
            TypeError: If an entry is not a BaseNode subclass.
        """
        for node_class in nodes:
            if not (
                isinstance(node_class, type)
                and issubclass(node_class, BaseNode)
            ):
                raise TypeError(f"{node_class!r} is not a BaseNode subclass")
        self.name = name
        self.max_steps = max_steps
        self.node_defs = dict.fromkeys(nodes)

    def __contains__(self, node_class: object) -> bool:
        return node_class in self.node_defs

    @property
    def label(self) -> str:
        return self.name or "-"

    @property
    def node_names(self) -> list[str]:
        return [node_class.__name__ for node_class in self.node_defs]

    @asynccontextmanager
    async def iter(
        self,
        start_node: BaseNode[StateT, DepsT, RunEndT],
        *,
        state: StateT,
        deps: DepsT | None = None,
    ) -> AsyncIterator[GraphRun[StateT, DepsT, RunEndT]]:
        """Yield a GraphRun to step through by hand or by ``async for``."""
        async with GraphRun(self, start_node, state, deps) as run:
            yield run

    async def run(
        self,
        start_node: BaseNode[StateT, DepsT, RunEndT],
        *,
        state: StateT,
        deps: DepsT | None = None,
    ) -> GraphRunResult[StateT, RunEndT]:
        """
        Run from ``start_node`` until a node returns End.

        Args:
            start_node: The first node to run
            state: Mutable state shared by the nodes
            deps: Read-only dependencies

        Returns:
            GraphRunResult with the End data, final state and node history
        """
        async with self.iter(start_node, state=state, deps=deps) as run:
            while not run.finished:
                await run.next()

        logger.info(
            "graph=%s nodes=%d seconds=%.3f",
            self.label,
            len(run.history),
            run.seconds,
        )
        return run.result
