"""Scheduler for bounded parallel task execution."""

import asyncio
from collections.abc import Coroutine
from typing import Any


class Scheduler:
    """Scheduler for controlling parallel execution."""

    def __init__(self, max_parallel: int | None = None):
        """
        Initialize scheduler.

        Args:
            max_parallel: Maximum number of parallel tasks (None = unlimited)
        """
        if max_parallel is not None and max_parallel < 1:
            raise ValueError(
                f"max_parallel must be positive, got {max_parallel}"
            )
        self.max_parallel = max_parallel

    async def execute_tasks(
        self,
        tasks: list[Coroutine[Any, Any, Any]],
        *,
        return_exceptions: bool = False,
    ) -> list[Any]:
        """
        Execute tasks with parallelism control.

        Args:
            tasks: List of coroutines to execute
            return_exceptions: Return raised exceptions in place of results
                instead of propagating the first one

        Returns:
            Results in the order of ``tasks``
        """
        if self.max_parallel is None:
            return await asyncio.gather(
                *tasks, return_exceptions=return_exceptions
            )

        semaphore = asyncio.Semaphore(self.max_parallel)

        async def execute_with_semaphore(
            task: Coroutine[Any, Any, Any],
        ) -> Any:
            async with semaphore:
                return await task

        return await asyncio.gather(
            *[execute_with_semaphore(task) for task in tasks],
            return_exceptions=return_exceptions,
        )
