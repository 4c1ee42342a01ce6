"""Numeric spot-checks of the analytic claims about G, w, v and eta.

Claims of the form "A <~ B" are checked as a finite best constant A / B
below a generous cap; refinement checks then require that constant to move
by less than 10% from N to 2N.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from heleshaw import (
    BoundViolation,
    GProfile,
    GridConvergence,
    InterfaceSolution,
    ProfileSolution,
    SpaceTimeEvaluator,
    check_norm_equivalence,
    corner,
    decay_envelope,
    evaluate_Z,
    holomorphy_defect,
    linearized_residual,
    residual_U,
    smoothness_tail,
    weight_bound_constant,
    weight_difference_quotients,
    weight_slope_constant,
)
from protocol import CheckResult
from realline import Field, derivative, integrate, sobolev_seminorm, taper

DECAY_CAP = 1000.0
CONSTANT_CAP = 10.0
REFINEMENT_RTOL = 0.1
INTEGRAL_TOL = 1e-6
ODDNESS_TOL = 1e-10
LINEARIZED_TOL = 1e-6
LOG_SPLIT_TOL = 1e-6
WEIGHT_POWER_TOL = 1e-12
CONTRACTION_RATIO = 0.9
LINEAR_RESIDUAL_TOL = 1e-9
SELFSIMILAR_TOL = 1e-6
FIRST_RESIDUAL_FACTOR = 10.0
SMOOTHNESS_TOL = 1e-4
BOUNDARY_DECAY_TOL = 0.1
ANGLE_RTOL = 0.02
POWER_RTOL = 0.02
XFX_RTOL = 0.05
FORMULA_TOL = 1e-12
SCALING_TOL = 1e-10
SCALING_LAMBDAS = (0.5, 2.0, 10.0)
CONSISTENCY_TOL = 1e-4
HOLOMORPHY_TOL = 1e-5
IM_U_TOL = 1e-6
GRID_CHANGE_TOL = 1e-3
QUOTIENT_NODES = 512
# tolerances that scale with epsilon never drop below this
ABS_FLOOR = 1e-12

# result each check group is anchored to; full names override prefixes
CLAIM_REFS = {
    "G": "G profile: decay, Sobolev tails and the log split",
    "iHG": "G profile: decay, Sobolev tails and the log split",
    "weight": "weight: two-sided growth, slope and difference quotients",
    "weight.a_range": "admissible epsilon: 1/2 < a < 3/2",
    "weight.smallness": "admissible epsilon: eps sup|x iH G_x| < 1/2",
    "weight.bound": "admissible epsilon: |w|^(+-1) <~ (1+x^2)^(1/1000)",
    "weight.norm_equivalence": "linear theory: weighted norm identity",
    "picard": "contraction of the fixed-point map",
    "linear": "linear theory: unique solution of L v = F",
    "selfsimilar": "existence of the self-similar profile",
    "decay": "decay of v, u, f and g in terms of ||v||_X",
    "decay.boundary": "weighted fields vanish at infinity",
    "smoothness": "full regularity: v is smooth",
    "interface": "corner asymptotics of the interface",
    "refine": "grid independence of the fitted constants",
    "suite": "every check names the result it tests",
}


def claim_ref(name: str) -> str:
    """Anchor of a check: its full name, else its group prefix."""
    return CLAIM_REFS.get(name, CLAIM_REFS.get(name.split(".")[0], ""))


def check(
    name: str,
    claim: str,
    measured: float,
    threshold: float,
    detail: str = "",
    *,
    strict: bool = False,
) -> CheckResult:
    """Pass when ``measured`` is finite and at most ``threshold``.

    With ``strict`` the bound is exclusive.
    """
    measured = float(measured)
    finite = math.isfinite(measured)
    within = measured < threshold if strict else measured <= threshold
    return CheckResult(
        name=name,
        claim_ref=claim_ref(name),
        claim=claim,
        measured=measured if finite else float("inf"),
        threshold=float(threshold),
        passed=finite and within,
        detail=detail,
    )


def _relative_change(coarse: float, fine: float) -> float:
    if coarse == fine:
        return 0.0
    return abs(fine - coarse) / max(abs(coarse), ABS_FLOOR)


def _per_norm(value: float, norm: float) -> float:
    return value / norm if norm > 0.0 else 0.0


G_ENVELOPES = (("G_x", 3.0, 1), ("G_xx", 4.0, 2), ("G_xxx", 5.0, 3))


def g_envelopes(gp: GProfile) -> dict[str, float]:
    """sup (1+x^2)^(1+n/2) |d^n G| for n = 1, 2, 3."""
    return {
        name: decay_envelope(getattr(gp, name), exponent)
        for name, exponent, _ in G_ENVELOPES
    }


def run_g_checks(gp: GProfile) -> list[CheckResult]:
    """Decay, spectral smoothness and the log split of G and iH G."""
    results = []
    envelopes = g_envelopes(gp)
    for name, _, n in G_ENVELOPES:
        results.append(
            check(
                f"G.decay.n{n}",
                f"|d^{n} G| <~ (1+x^2)^(-1-{n}/2)",
                envelopes[name],
                DECAY_CAP,
            )
        )

    # |D|^6 of the tapered G_x bounds ||(1+xi^2)^3 G_x_hat|| up to ||G_x||
    tapered = taper(gp.G_x)
    sobolev = math.hypot(tapered.l2_norm(), sobolev_seminorm(tapered, 6.0))
    results.append(
        check(
            "G.sobolev.k6",
            "||(1+xi^2)^(k/2) G_x_hat||_2 < inf for k <= 6",
            sobolev,
            DECAY_CAP,
        )
    )

    for n, field in [(1, gp.iHG_x), (2, gp.iHG_xx)]:
        results.append(
            check(
                f"iHG.decay.n{n}",
                f"|d^{n} iH G| <~ (1+x^2)^(-{n}/2)",
                decay_envelope(field, float(n)),
                CONSTANT_CAP,
            )
        )

    x, a = gp.x, gp.a
    inner = gp.grid.inner_mask()
    slope = (2.0 / math.pi) * x / (a**2 + x**2) + derivative(gp.V).values
    results.append(
        check(
            "iHG.log_split",
            "iH G = (1/pi) log(a^2 + x^2) + V with V decaying",
            float(np.max(np.abs(slope - gp.iHG_x.values)[inner])),
            LOG_SPLIT_TOL,
        )
    )

    G = gp.G.values
    results.extend(
        [
            check(
                "G.integral",
                "int G_x = 2, i.e. G_x_hat(0) = sqrt(2/pi)",
                abs(integrate(gp.G_x) - 2.0),
                INTEGRAL_TOL,
            ),
            check(
                "G.odd",
                "G(-x) = -G(x)",
                float(np.max(np.abs(G[1:] + G[:0:-1]))),
                ODDNESS_TOL,
            ),
            check(
                "G.linearized",
                "iH G_xxx + (x/3a) G_x = 0",
                linearized_residual(gp),
                LINEARIZED_TOL,
            ),
        ]
    )
    return results


def run_weight_checks(gp: GProfile) -> list[CheckResult]:
    """Smallness conditions on epsilon, weight bounds and identities."""
    w = gp.w.values
    gaussian = Field(gp.grid, np.exp(-(gp.x**2) / 2.0))
    try:
        equivalence = check_norm_equivalence(gaussian, gp)
        spread = abs(equivalence.ratio - 1.0)
        width = equivalence.upper - 1.0
        detail = f"ratio={equivalence.ratio:.6f}"
    except BoundViolation as exc:
        spread, width, detail = math.inf, 0.0, str(exc)
    quotients = weight_difference_quotients(gp, QUOTIENT_NODES)
    return [
        check(
            "weight.a_range",
            "1/2 < a < 3/2",
            abs(gp.a - 1.0),
            0.5,
            f"a={gp.a:.6f}",
            strict=True,
        ),
        check(
            "weight.smallness",
            "epsilon sup |x iH G_x| < 1/2",
            abs(gp.epsilon) * gp.sup_x_iHGx(),
            0.5,
            strict=True,
        ),
        check(
            "weight.bound",
            "|w|^(+-1) <~ (1+x^2)^(1/1000)",
            weight_bound_constant(gp),
            CONSTANT_CAP,
        ),
        check(
            "weight.gamma_power",
            "w = gamma^3 > 0",
            float(np.max(np.abs(w - gp.gamma_eps.values**3) / w)),
            WEIGHT_POWER_TOL,
            f"min w={float(np.min(w)):.4f}",
        ),
        check(
            "weight.slope",
            "|w_x| <~ |eps| (1+x^2)^(-1/2 + C eps)",
            weight_slope_constant(gp),
            CONSTANT_CAP,
        ),
        check(
            "weight.quotient",
            "|(w(x) - w(y)) / (x - y)| <~ 1",
            quotients.w,
            CONSTANT_CAP,
            f"nodes={quotients.n_nodes}",
        ),
        check(
            "weight.quotient_xw",
            "|(x w(x) - y w(y)) / (x - y)| <~ 1 + |x|^(C eps) + |y|^(C eps)",
            quotients.xw,
            CONSTANT_CAP,
            f"nodes={quotients.n_nodes}",
        ),
        check(
            "weight.norm_equivalence",
            "int v^2 (x w)_x within 1 +- 3 eps sup|x iH G_x| of ||v||^2_w",
            spread,
            max(width, ABS_FLOOR),
            detail,
        ),
    ]


def solution_constants(sol: ProfileSolution) -> dict[str, float]:
    """Best constants of the weighted decay bounds on v, u, f and g."""
    state, gp = sol.state, sol.profile
    x = gp.x
    X = sol.xnorm
    h = gp.grid.spacing
    v_xx = derivative(state.v_x).values
    u_xx = derivative(state.u_x).values
    return {
        "v": _per_norm(decay_envelope(state.v.values, 0.25, x), X),
        "u": _per_norm(decay_envelope(state.u.values, 0.25, x), X),
        "v_x": _per_norm(decay_envelope(state.v_x.values, 0.25, x), X),
        "v_xx": _per_norm(
            math.sqrt(h * np.sum((1.0 + x**2) ** 0.125 * v_xx**2)), X
        ),
        "u_xx": _per_norm(decay_envelope(u_xx, 1.0 / 32.0, x), X),
        "g_x": _per_norm(
            decay_envelope(state.g_x, 0.25, x), abs(gp.epsilon) + X
        ),
        "f_x": _per_norm(
            decay_envelope(state.f_x, 0.25, x), abs(gp.epsilon) + X
        ),
    }


SOLUTION_CLAIMS = {
    "v": "sup (1+x^2)^(1/8) |v| <~ ||v||_X",
    "u": "sup (1+x^2)^(1/8) |u| <~ ||v||_X",
    "v_x": "sup (1+x^2)^(1/8) |v_x| <~ ||v||_X",
    "v_xx": "||(1+x^2)^(1/16) v_xx||_2 <~ ||v||_X",
    "u_xx": "sup (1+x^2)^(1/64) |u_xx| <~ ||v||_X",
    "g_x": "sup (1+x^2)^(1/8) |g_x| <~ |eps| + ||v||_X",
    "f_x": "sup (1+x^2)^(1/8) |f_x| <~ |eps| + ||v||_X",
}


def _spectral_tail(values: np.ndarray) -> float:
    spectrum = np.abs(np.fft.rfft(values))
    peak = float(np.max(spectrum))
    if peak == 0.0:
        return 0.0
    cut = int(0.8 * spectrum.size)
    return float(np.max(spectrum[cut:]) / peak)


def _boundary_ratio(sol: ProfileSolution) -> float:
    gp = sol.profile
    x = gp.x
    weighted = (1.0 + x**2) ** 0.25 * np.sqrt(gp.w.values)
    weighted = weighted * np.abs(sol.v.values)
    peak = float(np.max(weighted))
    if peak == 0.0:
        return 0.0
    edge = np.abs(x) >= 0.9 * gp.grid.half_width
    return float(np.max(weighted[edge]) / peak)


def run_solution_checks(sol: ProfileSolution) -> list[CheckResult]:
    """Contraction, residuals, decay constants and smoothness of v."""
    report = sol.report
    tail_ratios = report.ratios[1:]
    results = [
        check(
            "picard.converged",
            "the Picard iteration converges",
            0.0 if report.converged else 1.0,
            0.0,
            f"steps={report.n_steps}",
        ),
        check(
            "picard.contraction",
            "||v_{n+1} - v_n||_X <= q ||v_n - v_{n-1}||_X, q < 1, n >= 3",
            max(tail_ratios, default=0.0),
            CONTRACTION_RATIO,
        ),
        check(
            "linear.residual",
            "L v_1 = S is solved to working precision",
            sol.solver.residual,
            LINEAR_RESIDUAL_TOL,
        ),
        check(
            "selfsimilar.residual",
            "the fixed point solves the self-similar equation",
            sol.residual,
            SELFSIMILAR_TOL,
        ),
        check(
            "selfsimilar.first_iterate",
            "v_1 = L^-1 S is not yet a solution",
            FIRST_RESIDUAL_FACTOR * sol.residual,
            max(sol.first_residual, ABS_FLOOR),
            f"first={sol.first_residual:.3e}",
        ),
    ]
    for name, constant in solution_constants(sol).items():
        results.append(
            check(
                f"decay.{name}",
                SOLUTION_CLAIMS[name],
                constant,
                CONSTANT_CAP,
            )
        )
    results.extend(
        [
            check(
                "smoothness.v",
                "v is smooth: its spectrum decays to the band edge",
                _spectral_tail(taper(sol.v).values),
                SMOOTHNESS_TOL,
            ),
            check(
                "decay.boundary",
                "(1+x^2)^(1/4) w^(1/2) v -> 0 as |x| -> inf",
                _boundary_ratio(sol),
                BOUNDARY_DECAY_TOL,
            ),
        ]
    )
    return results


def _scaling_error(ev: SpaceTimeEvaluator) -> float:
    worst = 0.0
    for lam in SCALING_LAMBDAS:
        for alpha in (-2.0, 0.5, 3.0):
            base = evaluate_Z(ev, alpha, 1.0).value
            scaled = evaluate_Z(ev, lam * alpha, lam ** (3.0 * ev.a)).value
            gap = abs(scaled - lam**ev.a * base)
            worst = max(worst, gap / max(abs(lam**ev.a * base), ABS_FLOOR))
    return worst


def run_interface_checks(sol: InterfaceSolution) -> list[CheckResult]:
    """Corner angles, growth exponent, x f_x limit and eta consistency."""
    gp = sol.profile
    eps = gp.epsilon
    a = gp.a
    angle_tol = max(ANGLE_RTOL * abs(eps), ABS_FLOOR)
    xfx_limit = 2.0 * eps / math.pi
    ev = SpaceTimeEvaluator.from_solution(sol)
    opening = cmath.phase(corner(1.0, eps) / corner(-1.0, eps))
    opening %= 2.0 * math.pi
    U = residual_U(sol)
    return [
        check(
            "interface.angle_plus",
            "arg eta -> eps as x -> +inf",
            abs(sol.angle_plus - eps),
            angle_tol,
            f"angle={sol.angle_plus:.6f}",
        ),
        check(
            "interface.angle_minus",
            "arg eta -> -(pi + eps) as x -> -inf",
            abs(sol.angle_minus + math.pi + eps),
            angle_tol,
            f"angle={sol.angle_minus:.6f}",
        ),
        check(
            "interface.power",
            "|eta| grows like |x|^a, a = 1 + 2 eps/pi",
            abs(sol.power_fit - a) / a,
            POWER_RTOL,
            f"fit={sol.power_fit:.6f}",
        ),
        check(
            "interface.xfx",
            "x f_x -> 2 eps/pi",
            abs(sol.xfx - xfx_limit),
            max(XFX_RTOL * abs(xfx_limit), ABS_FLOOR),
            f"xfx={sol.xfx:.6f}",
        ),
        check(
            "interface.corner",
            "Z(., 0) is a wedge of opening angle pi + 2 eps",
            abs(opening - (math.pi + 2.0 * eps)),
            FORMULA_TOL,
        ),
        check(
            "interface.scaling",
            "Z(lam alpha, lam^(3a) t) = lam^a Z(alpha, t)",
            _scaling_error(ev),
            SCALING_TOL,
        ),
        check(
            "interface.antiderivative",
            "d eta/dx = eta_x for the closed-form eta",
            sol.antiderivative_error,
            CONSISTENCY_TOL,
        ),
        check(
            "interface.im_U",
            "Im U = 0",
            U.im_sup,
            IM_U_TOL,
        ),
        check(
            "interface.holomorphy",
            "u + i iH u is the trace of a holomorphic function",
            holomorphy_defect(sol.state, gp),
            HOLOMORPHY_TOL,
        ),
        check(
            "interface.smoothness",
            "the curvature chain R is smooth",
            smoothness_tail(sol),
            SMOOTHNESS_TOL,
        ),
    ]


def run_refinement_checks(result: GridConvergence) -> list[CheckResult]:
    """N -> 2N stability of v, K and the fitted decay constants."""
    coarse, fine = result.coarse, result.fine
    results = [
        check(
            "refine.v",
            "||v(N) - v(2N)||_X / ||v(N)||_X -> 0",
            result.relative_change,
            GRID_CHANGE_TOL,
        )
    ]
    if result.K_change is not None:
        results.append(
            check(
                "refine.K",
                "the solution bound K is grid independent",
                result.K_change,
                REFINEMENT_RTOL,
            )
        )
    coarse_g, fine_g = g_envelopes(coarse.profile), g_envelopes(fine.profile)
    for name in coarse_g:
        results.append(
            check(
                f"refine.{name}",
                f"the decay constant of {name} is grid independent",
                _relative_change(coarse_g[name], fine_g[name]),
                REFINEMENT_RTOL,
            )
        )
    coarse_v = solution_constants(coarse)["v"]
    fine_v = solution_constants(fine)["v"]
    results.append(
        check(
            "refine.decay.v",
            "the decay constant of v is grid independent",
            _relative_change(coarse_v, fine_v),
            REFINEMENT_RTOL,
        )
    )
    return results
