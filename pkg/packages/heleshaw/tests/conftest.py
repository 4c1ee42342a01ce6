"""Pytest configuration and fixtures for heleshaw tests.

Profiles and converged solutions are session-scoped; building them is the
expensive part of every test here.
"""

from __future__ import annotations

import pytest

from heleshaw import (
    EpsilonParams,
    build_profile,
    picard_solve,
    reconstruct_eta,
)
from protocol import SolverConfig
from realline import Grid

EPSILON = 0.02


def desk_config(epsilon: float = EPSILON, **overrides) -> SolverConfig:
    values = dict(
        epsilon=epsilon,
        n_points=1024,
        half_width=50.0,
        tol=1e-9,
        max_iter=30,
    )
    values.update(overrides)
    return SolverConfig(**values)


@pytest.fixture(scope="session")
def make_config():
    """Fixture that provides the desk-scale SolverConfig factory."""
    return desk_config


@pytest.fixture(scope="session")
def grid() -> Grid:
    """Fixture that provides the desk-scale grid L = 50, N = 1024."""
    return Grid(half_width=50.0, n_points=1024)


@pytest.fixture(scope="session")
def flat_profile(grid):
    """Fixture that provides the epsilon = 0 profile (w = 1)."""
    return build_profile(EpsilonParams(0.0), grid)


@pytest.fixture(scope="session")
def profile(grid):
    """Fixture that provides the epsilon = 0.02 profile."""
    return build_profile(EpsilonParams(EPSILON), grid)


@pytest.fixture(scope="session")
def flat_solution(flat_profile):
    return picard_solve(flat_profile, desk_config(0.0))


@pytest.fixture(scope="session")
def solution(profile):
    """Fixture that provides the converged epsilon = 0.02 solution."""
    return picard_solve(profile, desk_config())


@pytest.fixture(scope="session")
def interface(solution):
    return reconstruct_eta(solution.state, solution.profile)


@pytest.fixture(scope="session")
def flat_interface(flat_solution):
    return reconstruct_eta(flat_solution.state, flat_solution.profile)
