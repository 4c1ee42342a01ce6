"""Tests for Graph and GraphRun."""

from __future__ import annotations

from dataclasses import dataclass, field

import pytest

from workflow import BaseNode, End, Graph, GraphRunContext


@dataclass
class SolveState:
    """Toy fixed-point run: halve a residual until it is small."""

    residual: float = 1.0
    steps: int = 0
    trace: list[str] = field(default_factory=list)


@dataclass
class Prepare(BaseNode[SolveState, float, int]):
    async def run(self, ctx: GraphRunContext[SolveState, float]) -> Iterate:
        ctx.state.trace.append("prepare")
        return Iterate()


@dataclass
class Iterate(BaseNode[SolveState, float, int]):
    async def run(
        self, ctx: GraphRunContext[SolveState, float]
    ) -> Iterate | Finish:
        ctx.state.residual /= 2.0
        ctx.state.steps += 1
        tol = ctx.deps if ctx.deps is not None else 0.1
        if ctx.state.residual <= tol:
            return Finish()
        return Iterate()


@dataclass
class Finish(BaseNode[SolveState, float, int]):
    async def run(self, ctx: GraphRunContext[SolveState, float]) -> End[int]:
        ctx.state.trace.append("finish")
        return End(ctx.state.steps)


@dataclass
class Broken(BaseNode[SolveState, float, int]):
    async def run(self, ctx: GraphRunContext[SolveState, float]) -> End[int]:
        raise ArithmeticError("non-finite residual")


PIPELINE = Graph(nodes=(Prepare, Iterate, Finish, Broken), name="toy")


@pytest.mark.asyncio
async def test_graph_runs_to_end():
    """Test a looping pipeline runs until its End node."""
    result = await PIPELINE.run(Prepare(), state=SolveState())

    assert result.output == 4
    assert result.state.residual == 0.0625
    assert result.state.trace == ["prepare", "finish"]


@pytest.mark.asyncio
async def test_graph_passes_deps():
    """Test deps reach every node."""
    result = await PIPELINE.run(Prepare(), state=SolveState(), deps=0.3)

    assert result.output == 2


@pytest.mark.asyncio
async def test_graph_records_history():
    """Test every executed node is recorded with a non-negative wall time."""
    result = await PIPELINE.run(Prepare(), state=SolveState())

    names = [record.node for record in result.history]
    assert names == ["Prepare"] + ["Iterate"] * 4 + ["Finish"]
    assert all(record.seconds >= 0.0 for record in result.history)
    assert not any(record.failed for record in result.history)


@pytest.mark.asyncio
async def test_failed_node_is_recorded_and_raised():
    """Test a raising node is recorded as failed and the error propagates."""
    async with PIPELINE.iter(Broken(), state=SolveState()) as run:
        with pytest.raises(ArithmeticError, match="non-finite"):
            async for _node in run:
                pass

    assert [r.node for r in run.history] == ["Broken"]
    assert run.history[0].failed
    assert run.result is None


@pytest.mark.asyncio
async def test_graph_iter_yields_executed_nodes():
    """Test iter yields the start node, each successor and the End node."""
    nodes = []
    async with PIPELINE.iter(Prepare(), state=SolveState()) as run:
        async for node in run:
            nodes.append(type(node).__name__)

    assert nodes[0] == "Prepare"
    assert nodes[-1] == "End"
    assert run.result is not None
    assert run.result.output == 4


@pytest.mark.asyncio
async def test_graph_raises_error_when_node_not_in_graph():
    """Test running a node class outside the graph raises ValueError."""
    graph = Graph(nodes=(Finish,))

    async with graph.iter(Prepare(), state=SolveState()) as run:
        with pytest.raises(ValueError, match="not in the graph"):
            await run.next(Prepare())


@pytest.mark.asyncio
async def test_step_limit_stops_a_runaway_loop():
    """Test a loop that never meets its tolerance hits max_steps."""
    graph = Graph(nodes=(Prepare, Iterate, Finish), max_steps=5)

    with pytest.raises(RuntimeError, match="max_steps=5"):
        await graph.run(Prepare(), state=SolveState(), deps=0.0)


def test_graph_rejects_non_node_classes():
    """Test only BaseNode subclasses can make up a graph."""
    with pytest.raises(TypeError, match="not a BaseNode subclass"):
        Graph(nodes=(Prepare, SolveState))


def test_graph_membership_and_names():
    """Test node classes are members and listed by name in order."""
    assert Iterate in PIPELINE
    assert SolveState not in PIPELINE
    assert PIPELINE.node_names == ["Prepare", "Iterate", "Finish", "Broken"]


@pytest.mark.asyncio
async def test_result_seconds_sum_the_history():
    """Test the result's wall time is the sum over executed nodes."""
    result = await PIPELINE.run(Prepare(), state=SolveState())

    assert result.seconds == pytest.approx(
        sum(r.seconds for r in result.history)
    )
