"""Run directory layout and the JSON/CSV files written into it."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from heleshaw import GProfile, InterfaceSolution, profile_summary
from protocol import NodeTiming, RunRecord, SweepEntry, SweepRecord
from realline import write_csv
from workflow import NodeRecord

from .pipeline import RunState

logger = logging.getLogger(__name__)

RUN_FILE = "run.json"
GPROFILE_FILE = "gprofile.json"
PROFILE_TABLE_FILE = "gprofile.csv"
DIAGNOSTICS_FILE = "diagnostics.json"
CHECKS_FILE = "checks.json"
SWEEP_FILE = "sweep.json"
FIELD_FILE = "v.csv"
INTERFACE_FILE = "interface.csv"
PLOT_FILE = "interface.svg"


def run_dir_name(epsilon: float) -> str:
    return f"eps_{epsilon:g}"


def run_record(state: RunState, history: list[NodeRecord]) -> RunRecord:
    """Collect the run.json payload from a finished pipeline state."""
    residuals: dict[str, float] = {}
    sol = state.solution
    if sol is not None:
        residuals["selfsimilar"] = sol.residual
        residuals["first_iterate"] = sol.first_residual
        residuals["linear"] = sol.solver.residual
    if state.interface is not None:
        residuals["antiderivative"] = state.interface.antiderivative_error
    if state.diagnostics is not None:
        residuals["holomorphy"] = state.diagnostics.holomorphy_defect
        residuals["im_U"] = state.diagnostics.U.im_sup
    return RunRecord(
        config=state.config,
        status=state.status,
        error=state.error,
        iteration=state.iteration,
        norms=sol.norms if sol is not None else None,
        residuals=residuals,
        solver=sol.solver if sol is not None else None,
        pipeline=[NodeTiming(node=r.node, seconds=r.seconds) for r in history],
        warnings=list(state.warnings),
    )


def read_run(run_dir: Path) -> RunRecord:
    """Load run.json.

    Raises:
        FileNotFoundError: If the directory has no run.json.
        pydantic.ValidationError: If run.json is not a valid record.
    """
    return RunRecord.model_validate_json((run_dir / RUN_FILE).read_text())


def write_profile_table(gp: GProfile, path: Path) -> Path:
    """Columns x, G, G_x, iHG, V, w."""
    gp.require_complete()
    table = np.column_stack(
        [
            gp.x,
            gp.G.values,
            gp.G_x.values,
            gp.iHG.values,
            gp.V.values,
            gp.w.values,
        ]
    )
    np.savetxt(
        path,
        table,
        delimiter=",",
        header="x,G,G_x,iHG,V,w",
        comments="",
        fmt="%.17g",
    )
    return path


def write_interface_table(sol: InterfaceSolution, path: Path) -> Path:
    """Columns x, Re eta, Im eta, f, g."""
    table = np.column_stack(
        [sol.x, sol.eta.real, sol.eta.imag, sol.state.f, sol.state.g]
    )
    np.savetxt(
        path,
        table,
        delimiter=",",
        header="x,re_eta,im_eta,f,g",
        comments="",
        fmt="%.17g",
    )
    return path


def write_run(
    run_dir: Path, state: RunState, history: list[NodeRecord]
) -> list[Path]:
    """Write every artifact the state holds; run.json is always written."""
    run_dir.mkdir(parents=True, exist_ok=True)
    written = []

    path = run_dir / RUN_FILE
    path.write_text(run_record(state, history).to_json())
    written.append(path)

    if state.profile is not None:
        path = run_dir / GPROFILE_FILE
        path.write_text(profile_summary(state.profile).to_json())
        written.append(path)
        written.append(
            write_profile_table(state.profile, run_dir / PROFILE_TABLE_FILE)
        )
    if state.solution is not None:
        written.append(write_csv(state.solution.v, run_dir / FIELD_FILE))
    if state.interface is not None:
        written.append(
            write_interface_table(state.interface, run_dir / INTERFACE_FILE)
        )
    if state.diagnostics is not None:
        path = run_dir / DIAGNOSTICS_FILE
        path.write_text(state.diagnostics.to_json())
        written.append(path)
    if state.checks is not None:
        path = run_dir / CHECKS_FILE
        path.write_text(state.checks.to_json())
        written.append(path)

    logger.info("artifacts dir=%s files=%d", run_dir, len(written))
    return written


def sweep_entry(state: RunState, run_dir: Path) -> SweepEntry:
    """Per-epsilon summary; ratios to epsilon are left empty at epsilon = 0."""
    eps = state.config.epsilon
    entry = SweepEntry(
        epsilon=eps,
        status=state.status,
        run_dir=str(run_dir),
        error=state.error,
    )
    if state.iteration is not None:
        entry.steps = state.iteration.n_steps
        entry.max_ratio = max(state.iteration.ratios, default=None)
    sol = state.solution
    if sol is not None:
        entry.xnorm = sol.xnorm
        if eps != 0.0:
            entry.xnorm_over_eps = sol.xnorm / abs(eps)
            entry.xnorm_over_eps2 = sol.xnorm / eps**2
            entry.source_over_eps2 = sol.S.l2_norm() / eps**2
    if state.interface is not None:
        entry.angle_plus = state.interface.angle_plus
        entry.angle_minus = state.interface.angle_minus
        entry.power_fit = state.interface.power_fit
    return entry


def write_sweep(output_dir: Path, record: SweepRecord) -> Path:
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / SWEEP_FILE
    path.write_text(record.to_json())
    return path
