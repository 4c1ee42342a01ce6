"""Solve pipeline: profile, Picard iteration, interface and checks."""

from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass, field
from pathlib import Path

from heleshaw import (
    ConsistencyFailure,
    ContractionFailure,
    EpsilonParams,
    EpsilonRejected,
    GProfile,
    GridConvergence,
    InterfaceSolution,
    IterateState,
    NoConvergence,
    ProfileSolution,
    QuadratureFailure,
    SingularSystem,
    build_profile,
    grid_convergence,
    interface_diagnostics,
    make_state,
    picard_solve,
    reconstruct_eta,
)
from protocol import (
    CheckReport,
    ErrorInfo,
    InterfaceDiagnostics,
    IterationReport,
    RunStatusName,
    SolverConfig,
)
from realline import Decay, Field, Grid, read_csv
from verify import run_suite
from workflow import BaseNode, End, Graph, GraphRunContext, NodeRecord

logger = logging.getLogger(__name__)


@dataclass
class RunState:
    """State for one run at a single epsilon."""

    config: SolverConfig
    profile: GProfile | None = None
    solution: ProfileSolution | None = None
    iterate: IterateState | None = None
    interface: InterfaceSolution | None = None
    diagnostics: InterfaceDiagnostics | None = None
    refinement: GridConvergence | None = None
    checks: CheckReport | None = None
    status: RunStatusName = "failed"
    error: ErrorInfo | None = None
    iteration: IterationReport | None = None
    warnings: list[str] = field(default_factory=list)


@dataclass
class RunDeps:
    """Dependencies for the solve pipeline."""

    verify: bool = False
    refine: bool = False
    iterate_path: Path | None = None
    max_parallel: int | None = None


def stop_run(
    state: RunState, status: RunStatusName, exc: Exception
) -> End[RunStatusName]:
    state.status = status
    state.error = ErrorInfo(type=type(exc).__name__, message=str(exc))
    logger.warning(
        "run eps=%g status=%s error=%s", state.config.epsilon, status, exc
    )
    return End(status)


@dataclass
class BuildProfile(BaseNode[RunState, RunDeps, RunStatusName]):
    """Node that builds G, iH G and the weight for the configured epsilon."""

    async def run(
        self, ctx: GraphRunContext[RunState, RunDeps]
    ) -> SolveProfile | LoadIterate | End[RunStatusName]:
        """
        Build the GProfile on the configured grid.

        Args:
            ctx: Graph run context

        Returns:
            LoadIterate when a saved iterate is given, else SolveProfile
        """
        cfg = ctx.state.config
        try:
            params = EpsilonParams(cfg.epsilon)
            grid = Grid(cfg.half_width, cfg.n_points, cfg.pad_factor)
            gp = await asyncio.to_thread(
                build_profile, params, grid, cfg.epsilon_cap
            )
        except EpsilonRejected as exc:
            return stop_run(ctx.state, "rejected", exc)
        except (QuadratureFailure, ConsistencyFailure) as exc:
            return stop_run(ctx.state, "failed", exc)

        ctx.state.profile = gp
        ctx.state.warnings.extend(gp.warnings)
        if ctx.deps is not None and ctx.deps.iterate_path is not None:
            return LoadIterate()
        return SolveProfile()


@dataclass
class SolveProfile(BaseNode[RunState, RunDeps, RunStatusName]):
    """Node that runs the Picard iteration."""

    async def run(
        self, ctx: GraphRunContext[RunState, RunDeps]
    ) -> ReconstructInterface | End[RunStatusName]:
        """
        Solve L v = N(v) + S.

        NoConvergence and ContractionFailure end the run with the partial
        iteration history kept on the state.

        Args:
            ctx: Graph run context

        Returns:
            ReconstructInterface, or End on a solver failure
        """
        state = ctx.state
        try:
            sol = await asyncio.to_thread(
                picard_solve, state.profile, state.config
            )
        except ContractionFailure as exc:
            state.iteration = exc.report
            return stop_run(state, "contraction_failure", exc)
        except NoConvergence as exc:
            state.iteration = exc.report
            return stop_run(state, "no_convergence", exc)
        except SingularSystem as exc:
            return stop_run(state, "failed", exc)

        state.solution = sol
        state.iterate = sol.state
        state.iteration = sol.report
        state.status = "converged"
        state.warnings.extend(
            w for w in sol.report.warnings if w not in state.warnings
        )
        return ReconstructInterface()


@dataclass
class LoadIterate(BaseNode[RunState, RunDeps, RunStatusName]):
    """Node that rebuilds the iterate state from a saved v.csv."""

    async def run(
        self, ctx: GraphRunContext[RunState, RunDeps]
    ) -> ReconstructInterface:
        gp = ctx.state.profile
        saved = read_csv(ctx.deps.iterate_path, gp.grid.pad_factor)
        if saved.values.shape != gp.x.shape:
            raise ValueError(
                f"{ctx.deps.iterate_path}: {saved.values.size} points, "
                f"config has {gp.grid.n_points}"
            )
        v = Field(gp.grid, saved.values, Decay.algebraic(2))
        ctx.state.iterate = make_state(v, gp)
        ctx.state.status = "converged"
        return ReconstructInterface()


@dataclass
class ReconstructInterface(BaseNode[RunState, RunDeps, RunStatusName]):
    """Node that reconstructs eta and the interface diagnostics."""

    async def run(
        self, ctx: GraphRunContext[RunState, RunDeps]
    ) -> VerifySolution | End[RunStatusName]:
        """
        Reconstruct eta and evaluate the interface diagnostics.

        Args:
            ctx: Graph run context

        Returns:
            VerifySolution when checks are requested, else End
        """
        state = ctx.state
        S = state.solution.S if state.solution is not None else None
        try:
            interface = await asyncio.to_thread(
                reconstruct_eta,
                state.iterate,
                state.profile,
                state.config.consistency_tol,
            )
        except ConsistencyFailure as exc:
            return stop_run(state, "failed", exc)

        state.interface = interface
        state.diagnostics = await asyncio.to_thread(
            interface_diagnostics, interface, S
        )
        verify = ctx.deps is not None and ctx.deps.verify
        if verify and state.solution is not None:
            return VerifySolution()
        return End(state.status)


@dataclass
class VerifySolution(BaseNode[RunState, RunDeps, RunStatusName]):
    """Node that runs the check suite, optionally with an N to 2N solve."""

    async def run(
        self, ctx: GraphRunContext[RunState, RunDeps]
    ) -> End[RunStatusName]:
        state = ctx.state
        if ctx.deps.refine:
            try:
                state.refinement = await asyncio.to_thread(
                    grid_convergence, state.config
                )
            except NoConvergence as exc:
                state.warnings.append(f"refinement skipped: {exc}")

        state.checks = await run_suite(
            state.solution,
            state.interface,
            state.refinement,
            max_parallel=ctx.deps.max_parallel,
        )
        if not state.checks.all_passed:
            state.status = "checks_failed"
        return End(state.status)


def create_solve_pipeline() -> Graph[RunState, RunDeps, RunStatusName]:
    """
    Create the pipeline shared by solve, sweep, reconstruct and verify.

    Returns:
        Configured workflow graph
    """
    return Graph(
        nodes=(
            BuildProfile,
            SolveProfile,
            LoadIterate,
            ReconstructInterface,
            VerifySolution,
        ),
        name="solve",
    )


async def execute_run(
    cfg: SolverConfig, deps: RunDeps | None = None
) -> tuple[RunState, list[NodeRecord]]:
    """
    Run the pipeline for one config, keeping the node history.

    A numeric error no node handles ends the run as 'failed' instead of
    propagating.

    Args:
        cfg: Solver configuration
        deps: Pipeline options

    Returns:
        The final state and the executed nodes with their wall times
    """
    graph = create_solve_pipeline()
    async with graph.iter(
        BuildProfile(), state=RunState(config=cfg), deps=deps or RunDeps()
    ) as run:
        try:
            async for _node in run:
                pass
        except (ArithmeticError, RuntimeError, ValueError) as exc:
            stop_run(run.state, "failed", exc)
    return run.state, run.history
