"""Nonlinear data F = N(v) + S and the Picard iteration L v_{n+1} = F_n.

With u = w^(1/3) v, g = epsilon G + u and f = iH u + epsilon iH G, the
self-similar equations for (f, g) read L v = N(v) + S. S collects the
terms that do not depend on v; N is written in seven groups, each
applying iH only to decaying products. Exponentials minus one are
evaluated with expm1.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from protocol import (
    IterationReport,
    IterationStep,
    NormReport,
    SolverConfig,
    SolverReport,
)
from realline import (
    Decay,
    Field,
    Grid,
    NonFiniteData,
    derivative,
    hilbert_derivative,
    ihilbert,
)

from .errors import ContractionFailure, NoConvergence
from .gprofile import EpsilonParams, GProfile, build_profile
from .linsolve import (
    LinearOperator,
    apply_L,
    assemble,
    condition_estimate,
    norms,
    random_test_fields,
    relative_residual,
    solution_bound,
    solve_L,
    xnorm,
)

logger = logging.getLogger(__name__)

REALNESS_RTOL = 1e-10
STALL_STEPS = 3
FALLBACK_RELAXATION = 0.5

_DECAYING = Decay.algebraic(2)


@dataclass(frozen=True)
class IterateState:
    """Fields derived from one iterate v.

    f and g are not decaying; they are kept as raw arrays next to the
    decaying pieces they are assembled from.
    """

    v: Field
    v_x: Field
    u: Field
    u_x: Field
    Hu: Field
    Hu_x: Field
    f: np.ndarray
    g: np.ndarray
    f_x: np.ndarray
    g_x: np.ndarray
    efm: np.ndarray
    ef2: np.ndarray

    @property
    def grid(self) -> Grid:
        return self.v.grid

    @property
    def q(self) -> Field:
        """e^(-f) g_x."""
        return Field(self.grid, self.efm * self.g_x, Decay.algebraic(3))


def make_state(v: Field, gp: GProfile) -> IterateState:
    """Build u, f, g and their derivatives from v.

    Raises:
        ValueError: If v has a non-negligible imaginary part.
        NonDecayingInput: If v is not tagged decaying.
    """
    gp.require_complete()
    v.require_same_grid(gp.G)
    v.require_decaying("make_state")
    if not v.is_real:
        leak = float(np.max(np.abs(v.values.imag)))
        if leak > REALNESS_RTOL * max(v.sup_norm(), 1.0):
            raise ValueError(f"iterate has imaginary part {leak:.3e}")
        v = v.real

    eps = gp.epsilon
    v_x = derivative(v)
    u = Field(gp.grid, gp.gamma_eps.values * v.values, _DECAYING)
    u_x = derivative(u)
    Hu = ihilbert(u)
    Hu_x = hilbert_derivative(u, 1)
    f = Hu.values + eps * gp.iHG.values
    return IterateState(
        v=v,
        v_x=v_x,
        u=u,
        u_x=u_x,
        Hu=Hu,
        Hu_x=Hu_x,
        f=f,
        g=eps * gp.G.values + u.values,
        f_x=Hu_x.values + eps * gp.iHG_x.values,
        g_x=eps * gp.G_x.values + u_x.values,
        efm=np.exp(-f),
        ef2=np.exp(2.0 * f),
    )


def _finite(grid: Grid, values: np.ndarray, what: str) -> Field:
    if not np.all(np.isfinite(values)):
        raise NonFiniteData(f"{what} has non-finite samples")
    return Field(grid, values, _DECAYING)


def assemble_S(gp: GProfile) -> Field:
    """S = -iH d^2(eps w^(-1/3) G_x) - eps w^(2/3) (x/3a) G_x.

    Raises:
        NonFiniteData: If S or w^(-1/2) S has non-finite samples.
    """
    gp.require_complete()
    eps = gp.epsilon
    grid = gp.grid
    if eps == 0.0:
        return Field(grid, np.zeros(grid.n_points), _DECAYING)
    inner = Field(
        grid, eps * gp.weight_power(-1.0 / 3.0) * gp.G_x.values,
        Decay.algebraic(3),
    )
    transport = gp.x / (3.0 * gp.a) * gp.G_x.values
    values = (
        -hilbert_derivative(inner, 2).values
        - eps * gp.weight_power(2.0 / 3.0) * transport
    )
    S = _finite(grid, values, "S")
    _finite(grid, values * gp.weight_power(-0.5), "w^(-1/2) S")
    return S


def assemble_N(state: IterateState, gp: GProfile) -> Field:
    """Seven groups of nonlinear terms.

    Raises:
        NonFiniteData: If any group produces non-finite samples.
    """
    eps = gp.epsilon
    grid = gp.grid
    transport = gp.x / (3.0 * gp.a)
    iHG_x = gp.iHG_x.values
    u = state.u.values
    v_x = state.v_x.values
    em1 = np.expm1(-state.Hu.values)
    e2m1 = np.expm1(2.0 * state.Hu.values)

    first = Field(
        grid,
        em1 * v_x + eps * state.efm * iHG_x * u,
        Decay.algebraic(3),
    )
    groups = -hilbert_derivative(first, 2).values
    groups -= gp.w.values * e2m1 * transport * v_x
    groups -= eps * state.ef2 * transport * iHG_x * u

    q = state.q
    Hq_x = hilbert_derivative(q, 1).values
    groups += state.f_x * Hq_x
    inner = Field(grid, np.exp(-2.0 * state.f) * Hq_x, _DECAYING)
    groups -= state.ef2 * state.g_x * ihilbert(inner).values

    if eps != 0.0:
        G_x = gp.G_x.values
        sixth = Field(
            grid, eps * em1 * gp.weight_power(-1.0 / 3.0) * G_x,
            Decay.algebraic(4),
        )
        groups -= hilbert_derivative(sixth, 2).values
        groups -= eps * e2m1 * gp.weight_power(2.0 / 3.0) * transport * G_x
    return _finite(grid, groups, "N")


def assemble_F(state: IterateState, gp: GProfile, S: Field | None = None):
    """F = N(v) + S."""
    S = assemble_S(gp) if S is None else S
    return S.with_values(assemble_N(state, gp).values + S.values)


def fixed_point_residual(
    v: Field, gp: GProfile, op: LinearOperator, S: Field | None = None
) -> float:
    """||L v - (N(v) + S)||_2."""
    F = assemble_F(make_state(v, gp), gp, S)
    Lv = apply_L(v, op)
    return Lv.with_values(Lv.values - F.values).l2_norm()


def residual_selfsimilar(
    state: IterateState, gp: GProfile, S: Field | None = None
) -> float:
    """Normalized residual of the self-similar equation for (f, g).

    Evaluates iH q_xx + e^(2f)(x/3a) g_x - f_x iH q_x
    + e^(2f) g_x iH(e^(-2f) iH q_x) with q = e^(-f) g_x, divided by
    ||e^(2f)(x/3a) g_x||_2 + ||S||_2. Returns 0 when that scale vanishes.
    """
    S = assemble_S(gp) if S is None else S
    grid = gp.grid
    q = state.q
    Hq_x = hilbert_derivative(q, 1).values
    transport = state.ef2 * gp.x / (3.0 * gp.a) * state.g_x
    inner = Field(grid, np.exp(-2.0 * state.f) * Hq_x, _DECAYING)
    values = (
        hilbert_derivative(q, 2).values
        + transport
        - state.f_x * Hq_x
        + state.ef2 * state.g_x * ihilbert(inner).values
    )
    h = grid.spacing
    scale = math.sqrt(h * np.sum(transport**2)) + S.l2_norm()
    if scale == 0.0:
        return 0.0
    return float(math.sqrt(h * np.sum(values**2)) / scale)


@dataclass(frozen=True)
class ProfileSolution:
    """Converged Picard iterate with everything derived from it."""

    profile: GProfile
    v: Field
    state: IterateState
    S: Field
    operator: LinearOperator
    report: IterationReport
    norms: NormReport
    solver: SolverReport
    first_residual: float
    residual: float

    @property
    def epsilon(self) -> float:
        return self.profile.epsilon

    @property
    def xnorm(self) -> float:
        return self.norms.xnorm


def _relaxed(v: Field, candidate: Field, theta: float) -> Field:
    if theta == 1.0:
        return candidate
    return v.with_values((1.0 - theta) * v.values + theta * candidate.values)


def picard_solve(
    gp: GProfile, cfg: SolverConfig, op: LinearOperator | None = None
) -> ProfileSolution:
    """Iterate v_{n+1} = L^{-1}(N(v_n) + S) from v_1 = L^{-1} S.

    Step n records Delta_n = ||v_{n+1} - v_n||_X, the ratio
    Delta_n / Delta_{n-1} and the self-similar residual of v_{n+1}. Three
    consecutive ratios >= 1 switch to relaxation 0.5 once.

    Raises:
        ContractionFailure: If ratios stay >= 1 after the fallback.
        NoConvergence: If ``max_iter`` steps do not meet the tolerance.
        SingularSystem: If L cannot be factored.
    """
    started = time.perf_counter()
    op = op or assemble(gp, cfg.delta, cfg.solve_method)
    S = assemble_S(gp)
    report = IterationReport(warnings=list(gp.warnings))
    if op.delta != cfg.delta:
        report.warnings.append(
            f"solved with delta={op.delta:g} after a singular LU at "
            f"delta={cfg.delta:g}"
        )

    v = solve_L(S, op)
    first_solve = relative_residual(v, S, op)
    K = solution_bound(v, S, gp)
    state = make_state(v, gp)
    first_residual = residual_selfsimilar(state, gp, S)
    residual = first_residual

    theta = cfg.relaxation
    previous: float | None = None
    stalled = 0
    warned_size = False
    for step in range(1, cfg.max_iter + 1):
        candidate = solve_L(assemble_F(state, gp, S), op)
        updated = _relaxed(v, candidate, theta)
        diff = xnorm(updated.with_values(updated.values - v.values), gp)
        size = xnorm(updated, gp)
        ratio = None if previous in (None, 0.0) else diff / previous
        v = updated
        state = make_state(v, gp)
        residual = residual_selfsimilar(state, gp, S)
        report.steps.append(
            IterationStep(
                step=step,
                xnorm=size,
                delta=diff,
                ratio=ratio,
                residual=residual,
                relaxation=theta,
            )
        )
        logger.info(
            "picard step=%d xnorm=%.3e delta=%.3e ratio=%s residual=%.3e",
            step,
            size,
            diff,
            "-" if ratio is None else f"{ratio:.3f}",
            residual,
        )
        if size >= cfg.smallness_cap and not warned_size:
            message = (
                f"iterate X-norm {size:.3e} reached smallness_cap="
                f"{cfg.smallness_cap:g}"
            )
            logger.warning(message)
            report.warnings.append(message)
            warned_size = True

        if diff <= cfg.tol + cfg.tol_rel * size:
            report.converged = True
            break

        stalled = stalled + 1 if ratio is not None and ratio >= 1.0 else 0
        if stalled >= STALL_STEPS:
            report.wall_time = time.perf_counter() - started
            if report.fallback_used or theta <= FALLBACK_RELAXATION:
                raise ContractionFailure(
                    f"step ratios >= 1 for {STALL_STEPS} steps at "
                    f"relaxation {theta:g} (epsilon={gp.epsilon:g})",
                    report,
                )
            message = (
                f"step ratios >= 1 for {STALL_STEPS} steps; relaxation "
                f"{theta:g} -> {FALLBACK_RELAXATION:g}"
            )
            logger.warning(message)
            report.warnings.append(message)
            report.fallback_used = True
            theta = FALLBACK_RELAXATION
            stalled = 0
        previous = diff

    report.wall_time = time.perf_counter() - started
    if not report.converged:
        raise NoConvergence(
            f"no convergence in {cfg.max_iter} steps "
            f"(last delta={report.steps[-1].delta:.3e})",
            report,
        )

    v_norms = norms(v, gp)
    solver = SolverReport(
        delta=op.delta,
        residual=first_solve,
        K_estimate=K,
        condition_estimate=condition_estimate(op),
        norms=v_norms,
    )
    logger.info(
        "converged eps=%g steps=%d xnorm=%.3e residual=%.3e",
        gp.epsilon,
        report.n_steps,
        v_norms.xnorm,
        residual,
    )
    return ProfileSolution(
        profile=gp,
        v=v,
        state=state,
        S=S,
        operator=op,
        report=report,
        norms=v_norms,
        solver=solver,
        first_residual=first_residual,
        residual=residual,
    )


def lipschitz_estimate(
    gp: GProfile, samples: int = 4, seed: int = 0, size: float = 0.05
) -> float:
    """Largest ||N(v) - N(v')||_2 / ((eps + |v|_X + |v'|_X) |v - v'|_X).

    Pairs are random decaying fields scaled to X-norm at most ``size``.
    """
    rng = np.random.default_rng(seed)
    fields = random_test_fields(gp, 2 * samples, seed)
    best = 0.0
    for first, second in zip(fields[::2], fields[1::2]):
        a = first.with_values(
            first.values * size * rng.uniform(0.1, 1.0) / xnorm(first, gp)
        )
        b = second.with_values(
            second.values * size * rng.uniform(0.1, 1.0) / xnorm(second, gp)
        )
        Na = assemble_N(make_state(a, gp), gp).values
        Nb = assemble_N(make_state(b, gp), gp).values
        gap = xnorm(a.with_values(a.values - b.values), gp)
        scale = (abs(gp.epsilon) + xnorm(a, gp) + xnorm(b, gp)) * gap
        change = math.sqrt(gp.grid.spacing * np.sum((Na - Nb) ** 2))
        best = max(best, change / scale)
    return float(best)


def solve_config(
    cfg: SolverConfig, grid: Grid | None = None
) -> ProfileSolution:
    """Build the profile for ``cfg`` and run the Picard iteration."""
    grid = grid or Grid(cfg.half_width, cfg.n_points, cfg.pad_factor)
    gp = build_profile(EpsilonParams(cfg.epsilon), grid, cfg.epsilon_cap)
    return picard_solve(gp, cfg)


@dataclass(frozen=True)
class GridConvergence:
    """v at N and 2N, compared on the coarse nodes."""

    coarse: ProfileSolution
    fine: ProfileSolution
    relative_change: float
    K_change: float | None


def grid_convergence(cfg: SolverConfig) -> GridConvergence:
    """Solve at N and 2N on the same domain.

    Returns ||v(N) - v(2N)||_X / ||v(N)||_X (0 when v(N) = 0) and the
    relative change of the solution-bound constant K.
    """
    grid = Grid(cfg.half_width, cfg.n_points, cfg.pad_factor)
    coarse = solve_config(cfg, grid)
    fine = solve_config(cfg, grid.refined())
    restricted = coarse.v.with_values(coarse.v.values - fine.v.values[::2])
    base = coarse.xnorm
    change = xnorm(restricted, coarse.profile) / base if base else 0.0
    K_coarse, K_fine = coarse.solver.K_estimate, fine.solver.K_estimate
    K_change = None
    if K_coarse and K_fine:
        K_change = abs(K_fine - K_coarse) / K_coarse
    logger.info(
        "grid convergence N=%d change=%.3e", cfg.n_points, change
    )
    return GridConvergence(coarse, fine, float(change), K_change)


def response_exponent(
    epsilons: list[float], xnorms: list[float]
) -> float | None:
    """Log-log slope of ||v||_X against |epsilon|; None below two points."""
    pairs = [
        (abs(e), x) for e, x in zip(epsilons, xnorms) if e != 0.0 and x > 0.0
    ]
    if len({e for e, _ in pairs}) < 2:
        return None
    eps, xn = np.log(np.array(pairs)).T
    slope, _ = np.polyfit(eps, xn, 1)
    return float(slope)
