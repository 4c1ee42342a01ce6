"""The full check suite and its table rendering."""

from __future__ import annotations

import asyncio
import logging
from collections.abc import Callable, Sequence
from typing import Any

from heleshaw import GridConvergence, InterfaceSolution, ProfileSolution
from protocol import CheckReport, CheckResult
from workflow import Scheduler

from .checks import (
    check,
    run_g_checks,
    run_interface_checks,
    run_refinement_checks,
    run_solution_checks,
    run_weight_checks,
)

logger = logging.getLogger(__name__)


def anchor_check(results: Sequence[CheckResult]) -> CheckResult:
    """Fails when any check lacks a bound or the result it anchors to."""
    missing = [
        r.name
        for r in results
        if not (r.claim.strip() and r.claim_ref.strip())
    ]
    return check(
        "suite.anchors",
        "every check states a bound and the result it tests",
        float(len(missing)),
        0.0,
        ", ".join(missing),
    )


async def run_suite(
    solution: ProfileSolution,
    interface: InterfaceSolution | None = None,
    refinement: GridConvergence | None = None,
    max_parallel: int | None = None,
) -> CheckReport:
    """Run every applicable check group concurrently.

    Groups run in worker threads under a bounded scheduler; their inputs
    are immutable. The anchor check is appended last.
    """
    gp = solution.profile
    groups: list[tuple[Callable[[Any], list[CheckResult]], Any]] = [
        (run_g_checks, gp),
        (run_weight_checks, gp),
        (run_solution_checks, solution),
    ]
    if interface is not None:
        groups.append((run_interface_checks, interface))
    if refinement is not None:
        groups.append((run_refinement_checks, refinement))

    scheduler = Scheduler(max_parallel=max_parallel)
    batches = await scheduler.execute_tasks(
        [asyncio.to_thread(group, arg) for group, arg in groups]
    )
    results = [r for batch in batches for r in batch]
    results.append(anchor_check(results))

    report = CheckReport(checks=results)
    logger.info(
        "verify eps=%g passed=%d/%d",
        gp.epsilon,
        report.n_passed,
        len(results),
    )
    for failed in (r for r in results if not r.passed):
        logger.warning(
            "check=%s measured=%.3e threshold=%.3e",
            failed.name,
            failed.measured,
            failed.threshold,
        )
    return report


def format_table(report: CheckReport) -> str:
    """Fixed-width table of name, measured, threshold and verdict."""
    width = max([len(c.name) for c in report.checks] + [5])
    header = f"{'check':<{width}}  {'measured':>11}  {'threshold':>11}  result"
    lines = [header, "-" * len(header)]
    for c in report.checks:
        verdict = "PASS" if c.passed else "FAIL"
        lines.append(
            f"{c.name:<{width}}  {c.measured:>11.3e}  "
            f"{c.threshold:>11.3e}  {verdict}"
        )
    lines.append(f"{report.n_passed}/{len(report.checks)} passed")
    return "\n".join(lines)
