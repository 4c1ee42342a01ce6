"""Pytest configuration and fixtures for verify tests."""

from __future__ import annotations

import pytest

from heleshaw import EpsilonParams, build_profile, picard_solve, reconstruct_eta
from protocol import SolverConfig
from realline import Grid


def desk_run(epsilon: float):
    config = SolverConfig(
        epsilon=epsilon, n_points=1024, half_width=50.0, tol=1e-9, max_iter=30
    )
    gp = build_profile(EpsilonParams(epsilon), Grid(50.0, 1024))
    solution = picard_solve(gp, config)
    return solution, reconstruct_eta(solution.state, gp)


@pytest.fixture(scope="session")
def flat_run():
    """Fixture that provides the epsilon = 0 solution and interface."""
    return desk_run(0.0)


@pytest.fixture(scope="session")
def corner_run():
    """Fixture that provides the epsilon = 0.02 solution and interface."""
    return desk_run(0.02)
