"""Tests for the linearized profile G, iH G and the weight."""

from __future__ import annotations

import math
from unittest.mock import patch

import numpy as np
import pytest

from heleshaw import (
    EpsilonParams,
    EpsilonRejected,
    GProfile,
    build_G,
    build_profile,
    decay_envelope,
    linearized_residual,
    profile_summary,
    weight_bound_constant,
    weight_difference_quotients,
    weight_slope,
    weight_slope_constant,
)
from heleshaw.fourier import g_samples
from realline import derivative, integrate


def test_exponent_a():
    """Test a = 1 + 2 epsilon / pi."""
    assert EpsilonParams(0.02).a == pytest.approx(1.0 + 0.04 / math.pi)


@pytest.mark.parametrize("epsilon", [0.9, -0.8])
def test_epsilon_rejected_outside_a_range(epsilon):
    """Test a outside (1/2, 3/2) is rejected."""
    with pytest.raises(EpsilonRejected, match="outside"):
        EpsilonParams(epsilon)


def test_C_const_limit_at_zero():
    """Test C_const tends to 2/pi continuously as epsilon -> 0."""
    assert EpsilonParams(0.0).C_const == 2.0 / math.pi
    assert EpsilonParams(1e-6).C_const == pytest.approx(2.0 / math.pi, 1e-6)


def test_G_x_at_origin_for_unit_a():
    """Test G_x(0) = (2/pi) Gamma(4/3) ~ 0.5685 at a = 1."""
    G_x0 = g_samples(np.array([0.0]), 1.0).G_x[0]

    assert G_x0 == pytest.approx((2.0 / math.pi) * math.gamma(4 / 3), abs=1e-8)
    assert G_x0 == pytest.approx(0.5685, abs=1e-4)


def test_integral_of_G_x_is_two(profile):
    """Test int G_x = 2, i.e. G_x_hat(0) = sqrt(2/pi)."""
    assert integrate(profile.G_x) == pytest.approx(2.0, abs=1e-6)


def test_G_is_odd_with_unit_limits(profile):
    """Test G(-x) = -G(x) and G(+-L) ~ +-1."""
    G = profile.G.values

    assert np.max(np.abs(G[1:] + G[:0:-1])) < 1e-10
    assert G[profile.grid.n_points // 2] == 0.0
    assert G[-1] == pytest.approx(1.0, abs=1e-4)
    assert G[0] == pytest.approx(-1.0, abs=1e-4)


def test_G_solves_linearized_equation(profile):
    """Test iH G_xxx + (x/3a) G_x = 0 to small relative residual."""
    assert linearized_residual(profile) < 1e-5


def test_iHG_derivative_matches_quadrature(profile):
    """Test the log split differentiates back to iH G_x."""
    x = profile.x
    a = profile.a
    inner = profile.grid.inner_mask()
    log_slope = (2.0 / math.pi) * x / (a**2 + x**2)
    slope = log_slope + derivative(profile.V).values

    assert np.max(np.abs(slope - profile.iHG_x.values)[inner]) < 1e-6


def test_iHG_is_even(profile):
    """Test iH G is even and grows like (2/pi) log|x|."""
    iHG = profile.iHG.values
    inner = profile.grid.inner_mask()
    mirrored = iHG[:0:-1]

    assert np.max(np.abs(iHG[1:] - mirrored)[inner[1:]]) < 1e-6
    assert iHG[-1] > iHG[profile.grid.n_points // 2]


def test_flat_profile_has_unit_weight(flat_profile):
    """Test epsilon = 0 gives w = 1 and gamma = 1."""
    assert np.all(flat_profile.w.values == 1.0)
    assert np.all(flat_profile.gamma_eps.values == 1.0)
    assert flat_profile.C_growth == 0.0


def test_weight_is_positive_power_of_gamma(profile):
    """Test w > 0 and w = gamma^3."""
    w = profile.w.values

    assert np.all(w > 0)
    assert np.max(np.abs(w - profile.gamma_eps.values**3) / w) < 1e-12


def test_weight_at_origin_closed_form(profile):
    """Test w(0) = (1 + 2 eps/pi)^3 a^(6 eps/pi) exp(3 eps V(0))."""
    eps, a = profile.epsilon, profile.a
    zero = profile.grid.nearest_index(0.0)
    expected = (
        (1.0 + 2.0 * eps / math.pi) ** 3
        * a ** (6.0 * eps / math.pi)
        * math.exp(3.0 * eps * profile.V.values[zero])
    )

    assert profile.x[zero] == 0.0
    assert profile.w.values[zero] == pytest.approx(expected, rel=1e-12)


def test_weight_slope_matches_finite_differences(profile):
    """Test w_x = 3 eps iH G_x w against a centred difference of w."""
    inner = profile.grid.inner_mask()
    h = profile.grid.spacing
    numeric = np.gradient(profile.w.values, h)
    exact = weight_slope(profile)

    assert np.max(np.abs(numeric - exact)[inner]) < 1e-3
    assert np.max(np.abs(exact)) > 0.0


def test_weight_slope_constant_below_cap(profile):
    """Test |w_x| <= K |eps| (1+x^2)^(-1/2 + C eps) with K below 10."""
    assert 0.0 < weight_slope_constant(profile) < 10.0


def test_weight_difference_quotients_below_cap(profile):
    """Test the w and x w difference quotients are bounded."""
    quotients = weight_difference_quotients(profile, max_nodes=512)

    assert quotients.n_nodes == 512
    assert 0.0 < quotients.w < 10.0
    assert 0.0 < quotients.xw < 10.0


def test_flat_weight_has_trivial_quotients(flat_profile):
    """Test w = 1 has zero slope and an x w quotient of 1/3."""
    quotients = weight_difference_quotients(flat_profile)

    assert weight_slope_constant(flat_profile) == 0.0
    assert quotients.w == 0.0
    assert quotients.xw == pytest.approx(1.0 / 3.0)


def test_weight_bound_constant_below_cap(profile):
    """Test max |w|^(+-1)(1+x^2)^(-1/1000) stays below 10."""
    assert 1.0 <= weight_bound_constant(profile) < 10.0


def test_smallness_condition_holds(profile):
    """Test epsilon sup |x iH G_x| < 1/2."""
    assert profile.epsilon * profile.sup_x_iHGx() < 0.5


def test_smallness_violation_is_rejected(grid):
    """Test epsilon sup |x iH G_x| >= 1/2 raises EpsilonRejected."""
    with patch.object(GProfile, "sup_x_iHGx", return_value=1.0):
        with pytest.raises(EpsilonRejected, match="not below 1/2"):
            build_profile(EpsilonParams(0.5), grid)


def test_epsilon_above_cap_is_warned(grid):
    """Test |epsilon| > epsilon_cap is recorded, not rejected."""
    gp = build_profile(EpsilonParams(0.1), grid, epsilon_cap=0.05)

    assert gp.is_complete
    assert any("epsilon_cap" in w for w in gp.warnings)


def test_build_G_leaves_profile_incomplete(grid):
    """Test the first stage has no weight yet."""
    gp = build_G(EpsilonParams(0.01), grid)

    assert not gp.is_complete
    with pytest.raises(ValueError, match="missing"):
        gp.require_complete()


def test_decay_envelopes_stable_under_refinement(profile):
    """Test decay constants of G_x, G_xx, G_xxx change < 10% from N to 2N."""
    fine = build_profile(
        EpsilonParams(profile.epsilon), profile.grid.refined()
    )

    for name, exponent in [("G_x", 3.0), ("G_xx", 4.0), ("G_xxx", 5.0)]:
        coarse_c = decay_envelope(getattr(profile, name), exponent)
        fine_c = decay_envelope(getattr(fine, name), exponent)
        assert math.isfinite(coarse_c)
        assert fine_c == pytest.approx(coarse_c, rel=0.1)


def test_iHG_derivative_decay_envelopes(profile):
    """Test sup (1+x^2)^(n/2) |d^n iH G| is finite for n = 1, 2."""
    assert decay_envelope(profile.iHG_x, 1.0) < 10.0
    assert decay_envelope(profile.iHG_xx, 2.0) < 10.0


def test_profile_summary(profile):
    """Test the gprofile.json payload."""
    summary = profile_summary(profile)
    payload = summary.model_dump(by_alias=True)

    assert payload["schema"] == 1
    assert summary.integral_Gx == pytest.approx(2.0, abs=1e-6)
    assert summary.oddness < 1e-10
    assert set(summary.decay_envelopes) == {
        "G_x",
        "G_xx",
        "G_xxx",
        "iHG_x",
        "iHG_xx",
    }
