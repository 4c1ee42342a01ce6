"""Pytest configuration and fixtures for realline tests."""

from __future__ import annotations

import pytest

from realline import Grid


@pytest.fixture
def grid() -> Grid:
    """Fixture that provides a desk-scale grid with h ~ 0.1."""
    return Grid(half_width=50.0, n_points=1024)


@pytest.fixture
def fine_grid() -> Grid:
    """Fixture that provides a grid with h ~ 0.05 for oracle comparisons."""
    return Grid(half_width=25.0, n_points=1024)
