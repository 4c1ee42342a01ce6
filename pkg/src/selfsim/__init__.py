"""Command line for self-similar Hele-Shaw corner profiles."""

from .cli import ConfigError, main
from .pipeline import (
    RunDeps,
    RunState,
    create_solve_pipeline,
    execute_run,
)

__all__ = [
    "ConfigError",
    "RunDeps",
    "RunState",
    "create_solve_pipeline",
    "execute_run",
    "main",
]
