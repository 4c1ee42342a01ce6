"""Tests for Scheduler."""

from __future__ import annotations

import asyncio

import pytest

from workflow import Scheduler


class Gauge:
    """Tracks how many tasks run at once."""

    def __init__(self) -> None:
        self.active = 0
        self.peak = 0

    async def task(self, value: int) -> int:
        self.active += 1
        self.peak = max(self.peak, self.active)
        await asyncio.sleep(0.01)
        self.active -= 1
        return value * value


@pytest.mark.asyncio
async def test_results_keep_task_order():
    """Test results come back in submission order."""
    gauge = Gauge()
    scheduler = Scheduler()

    results = await scheduler.execute_tasks([gauge.task(i) for i in range(5)])

    assert results == [0, 1, 4, 9, 16]


@pytest.mark.asyncio
async def test_max_parallel_bounds_concurrency():
    """Test no more than max_parallel tasks run at once."""
    gauge = Gauge()
    scheduler = Scheduler(max_parallel=2)

    results = await scheduler.execute_tasks([gauge.task(i) for i in range(6)])

    assert results == [i * i for i in range(6)]
    assert gauge.peak == 2


@pytest.mark.asyncio
async def test_exceptions_propagate_by_default():
    """Test the first exception is raised without return_exceptions."""

    async def fail() -> None:
        raise RuntimeError("no convergence")

    with pytest.raises(RuntimeError, match="no convergence"):
        await Scheduler(max_parallel=1).execute_tasks([fail()])


@pytest.mark.asyncio
async def test_return_exceptions_isolates_failures():
    """Test failures are returned in place while other tasks finish."""
    gauge = Gauge()

    async def fail() -> None:
        raise RuntimeError("no convergence")

    results = await Scheduler(max_parallel=2).execute_tasks(
        [gauge.task(2), fail(), gauge.task(3)], return_exceptions=True
    )

    assert results[0] == 4
    assert isinstance(results[1], RuntimeError)
    assert results[2] == 9


def test_invalid_max_parallel():
    """Test max_parallel must be positive."""
    with pytest.raises(ValueError, match="positive"):
        Scheduler(max_parallel=0)
