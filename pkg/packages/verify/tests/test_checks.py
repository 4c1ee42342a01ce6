"""Tests for the individual check groups."""

from __future__ import annotations

import math

import pytest

from heleshaw import GridConvergence
from verify import (
    check,
    run_g_checks,
    run_interface_checks,
    run_refinement_checks,
    run_solution_checks,
    run_weight_checks,
    solution_constants,
)


def by_name(results):
    return {r.name: r for r in results}


def test_check_bounds():
    """Test inclusive and strict thresholds."""
    assert check("c", "claim", 0.5, 0.5).passed
    assert not check("c", "claim", 0.5, 0.5, strict=True).passed
    assert not check("c", "claim", 0.6, 0.5).passed


def test_check_rejects_non_finite():
    """Test NaN and inf never pass and are reported as inf."""
    result = check("c", "claim", math.nan, 1.0)

    assert not result.passed
    assert result.measured == math.inf


def test_flat_run_passes_every_group(flat_run):
    """Test epsilon = 0 passes all checks with w = 1 and v = 0."""
    solution, interface = flat_run
    gp = solution.profile
    results = (
        run_g_checks(gp)
        + run_weight_checks(gp)
        + run_solution_checks(solution)
        + run_interface_checks(interface)
    )

    failed = [r.name for r in results if not r.passed]
    assert failed == []
    assert all(r.claim for r in results)


def test_g_checks(corner_run):
    """Test the G decay, log split, integral and oddness checks pass."""
    solution, _ = corner_run
    results = by_name(run_g_checks(solution.profile))

    for name in [
        "G.decay.n1",
        "G.decay.n2",
        "G.decay.n3",
        "G.sobolev.k6",
        "iHG.decay.n1",
        "iHG.decay.n2",
        "iHG.log_split",
        "G.integral",
        "G.odd",
    ]:
        assert results[name].passed, name
    assert results["G.linearized"].measured < 1e-5


def test_weight_checks(corner_run):
    """Test the epsilon conditions and weight identities hold at 0.02."""
    solution, _ = corner_run

    results = run_weight_checks(solution.profile)

    assert [r.name for r in results if not r.passed] == []
    names = {r.name for r in results}
    assert {"weight.slope", "weight.quotient", "weight.quotient_xw"} <= names


def test_solution_checks(corner_run):
    """Test convergence, contraction and the decay constants at 0.02."""
    solution, _ = corner_run
    results = by_name(run_solution_checks(solution))

    for name in [
        "picard.converged",
        "picard.contraction",
        "linear.residual",
        "decay.v",
        "decay.u",
        "decay.v_x",
        "decay.v_xx",
        "decay.u_xx",
        "decay.g_x",
        "decay.f_x",
        "decay.boundary",
    ]:
        assert results[name].passed, name


def test_solution_constants_vanish_for_flat_run(flat_run):
    """Test the decay constants are 0 when v = 0 and epsilon = 0."""
    solution, _ = flat_run

    assert set(solution_constants(solution).values()) == {0.0}


def test_interface_checks(corner_run):
    """Test angles, exponent, x f_x and the formula checks at 0.02."""
    _, interface = corner_run
    results = by_name(run_interface_checks(interface))

    for name in [
        "interface.angle_plus",
        "interface.angle_minus",
        "interface.power",
        "interface.xfx",
        "interface.corner",
        "interface.scaling",
        "interface.antiderivative",
    ]:
        assert results[name].passed, name


def test_refinement_checks(corner_run):
    """Test identical coarse and fine runs pass, a large change fails."""
    solution, _ = corner_run
    same = GridConvergence(solution, solution, 0.0, 0.0)
    drift = GridConvergence(solution, solution, 0.5, 0.2)

    assert all(r.passed for r in run_refinement_checks(same))
    failed = {r.name for r in run_refinement_checks(drift) if not r.passed}
    assert failed == {"refine.v", "refine.K"}


def test_refinement_without_K(flat_run):
    """Test the K check is skipped when K is undefined."""
    solution, _ = flat_run

    results = run_refinement_checks(
        GridConvergence(solution, solution, 0.0, None)
    )

    assert "refine.K" not in by_name(results)


@pytest.mark.parametrize("epsilon", [0.0, 0.02])
def test_every_check_names_its_claim(epsilon, flat_run, corner_run):
    """Test no check has an empty claim."""
    solution, interface = flat_run if epsilon == 0.0 else corner_run

    results = run_solution_checks(solution) + run_interface_checks(interface)

    assert all(r.claim.strip() for r in results)
    assert all(r.claim_ref.strip() for r in results)


def test_flat_weight_quotients(flat_run):
    """Test w = 1 gives a zero slope and the bare x w quotient 1/3."""
    solution, _ = flat_run
    results = by_name(run_weight_checks(solution.profile))

    assert results["weight.slope"].measured == 0.0
    assert results["weight.quotient"].measured == 0.0
    assert results["weight.quotient_xw"].measured == pytest.approx(1 / 3)


def test_u_constant_is_bounded(corner_run):
    """Test the u decay constant is reported and finite at 0.02."""
    solution, _ = corner_run

    constants = solution_constants(solution)

    assert 0.0 < constants["u"] < 10.0


@pytest.mark.parametrize(
    ("name", "ref"),
    [
        ("decay.boundary", "weighted fields vanish at infinity"),
        ("decay.u", "decay of v, u, f and g in terms of ||v||_X"),
        ("weight.quotient", "weight: two-sided growth, slope and"),
        ("weight.a_range", "admissible epsilon: 1/2 < a < 3/2"),
        ("interface.xfx", "corner asymptotics of the interface"),
    ],
)
def test_check_fills_claim_ref(name, ref):
    """Test full names override the group anchor of a check."""
    result = check(name, "claim", 0.0, 1.0)

    assert result.claim_ref.startswith(ref)


def test_unknown_group_has_no_claim_ref():
    """Test a check outside the known groups is left unanchored."""
    assert check("other.value", "claim", 0.0, 1.0).claim_ref == ""
