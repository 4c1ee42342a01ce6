"""Numeric verification of the self-similar construction."""

from .checks import (
    check,
    run_g_checks,
    run_interface_checks,
    run_refinement_checks,
    run_solution_checks,
    run_weight_checks,
    solution_constants,
)
from .suite import anchor_check, format_table, run_suite

__all__ = [
    "anchor_check",
    "check",
    "format_table",
    "run_g_checks",
    "run_interface_checks",
    "run_refinement_checks",
    "run_solution_checks",
    "run_suite",
    "run_weight_checks",
    "solution_constants",
]
