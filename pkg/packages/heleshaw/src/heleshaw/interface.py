"""Interface reconstruction from a converged (f, g) pair.

eta_x = e^(f + i g). With q = e^(-f) g_x and R = e^(-2f) iH q_x the
antiderivative is the closed form

    eta = eta_x (x/a + 3 iH R + 3 i R),

whose derivative equals eta_x exactly when the self-similar equation
holds; the mismatch is 3 |U|. The space-time interface is
Z(alpha, t) = t^(1/3) eta(t^(-1/(3a)) alpha).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from protocol import InterfaceDiagnostics, UResiduals
from realline import (
    Decay,
    Field,
    derivative,
    hilbert_derivative,
    ihilbert,
    integrate,
)

from .errors import ConsistencyFailure
from .gprofile import GProfile
from .nonlinear import IterateState, residual_selfsimilar

logger = logging.getLogger(__name__)

ANGLE_WINDOW = (0.25, 0.5)
POWER_WINDOW = (0.125, 0.5)
TAIL_FRACTION = 0.8


@dataclass(frozen=True)
class InterfaceSolution:
    """eta_x, eta and the curvature chain of a converged state."""

    state: IterateState
    profile: GProfile
    eta_x: np.ndarray
    eta: np.ndarray
    R: Field
    HR: Field
    R_x: Field
    HR_x: Field
    curvature_term: np.ndarray
    antiderivative_error: float
    angle_plus: float
    angle_minus: float
    power_fit: float
    xfx: float

    @property
    def x(self) -> np.ndarray:
        return self.profile.x

    @property
    def exponent(self) -> float:
        return self.profile.a


def _angles(eta: np.ndarray, gp: GProfile) -> tuple[float, float]:
    lo, hi = (f * gp.grid.half_width for f in ANGLE_WINDOW)
    plus = np.angle(eta[gp.grid.window(lo, hi)])
    minus = np.angle(eta[gp.grid.window(-hi, -lo)])
    # the lower ray sits near -pi; keep it on one branch
    minus = np.where(minus > 0.0, minus - 2.0 * math.pi, minus)
    return float(np.median(plus)), float(np.median(minus))


def _power_fit(eta: np.ndarray, gp: GProfile) -> float:
    lo, hi = (f * gp.grid.half_width for f in POWER_WINDOW)
    window = gp.grid.window(lo, hi)
    log_x = np.log(gp.x[window])
    slope, _ = np.polyfit(log_x, np.log(np.abs(eta[window])), 1)
    return float(slope)


def _inner_sup(values: np.ndarray, gp: GProfile) -> float:
    return float(np.max(np.abs(values[gp.grid.inner_mask()])))


def reconstruct_eta(
    state: IterateState, gp: GProfile, consistency_tol: float = 1e-4
) -> InterfaceSolution:
    """Evaluate eta_x, the closed-form eta and the corner diagnostics.

    Raises:
        ConsistencyFailure: If |d eta/dx - eta_x| / |eta_x| exceeds
            ``consistency_tol`` on the inner half-domain.
    """
    grid = gp.grid
    x = gp.x
    a = gp.a
    eta_x = np.exp(state.f + 1j * state.g)
    q = state.q
    R = Field(
        grid,
        np.exp(-2.0 * state.f) * hilbert_derivative(q, 1).values,
        Decay.algebraic(2),
    )
    HR = ihilbert(R)
    R_x = derivative(R)
    HR_x = hilbert_derivative(R, 1)

    B = x / a + 3.0 * HR.values + 3.0j * R.values
    B_x = 1.0 / a + 3.0 * HR_x.values + 3.0j * R_x.values
    eta = eta_x * B
    # d eta/dx / eta_x - 1
    mismatch = (state.f_x + 1j * state.g_x) * B + B_x - 1.0
    error = _inner_sup(mismatch, gp)
    if error > consistency_tol:
        raise ConsistencyFailure(
            f"d eta/dx differs from eta_x by {error:.3e} relative "
            f"(tolerance {consistency_tol:g})"
        )

    angle_plus, angle_minus = _angles(eta, gp)
    half = grid.nearest_index(0.5 * grid.half_width)
    logger.info(
        "interface eps=%g angles=(%.6f, %.6f) antiderivative_error=%.3e",
        gp.epsilon,
        angle_plus,
        angle_minus,
        error,
    )
    return InterfaceSolution(
        state=state,
        profile=gp,
        eta_x=eta_x,
        eta=eta,
        R=R,
        HR=HR,
        R_x=R_x,
        HR_x=HR_x,
        curvature_term=1j * q.values,
        antiderivative_error=error,
        angle_plus=angle_plus,
        angle_minus=angle_minus,
        power_fit=_power_fit(eta, gp),
        xfx=float(x[half] * state.f_x[half]),
    )


def residual_U(sol: InterfaceSolution) -> UResiduals:
    """Re U and Im U on the inner half-domain, and the x f_x tail limit."""
    state, gp = sol.state, sol.profile
    x = gp.x
    a = gp.a
    f_x, g_x = state.f_x, state.g_x
    R, HR = sol.R.values, sol.HR.values
    R_x, HR_x = sol.R_x.values, sol.HR_x.values
    re_U = (
        1.0 / 3.0
        - 1.0 / (3.0 * a)
        - x / (3.0 * a) * f_x
        - f_x * HR
        + g_x * R
        - HR_x
    )
    im_U = x / (3.0 * a) * g_x + f_x * R + g_x * HR + R_x
    U = re_U + 1j * im_U
    inner = gp.grid.inner_mask()
    h = gp.grid.spacing
    return UResiduals(
        sup_norm=float(np.max(np.abs(U[inner]))),
        l2_norm=float(math.sqrt(h * np.sum(np.abs(U[inner]) ** 2))),
        im_sup=float(np.max(np.abs(im_U[inner]))),
        re_sup=float(np.max(np.abs(re_U[inner]))),
        xfx_limit=abs(sol.xfx - 2.0 * gp.epsilon / math.pi),
    )


def holomorphy_defect(state: IterateState, gp: GProfile) -> float:
    """||u~ + iH(iH u~)|| / ||u~|| on the inner half, u~ = u minus its mean.

    The mean is removed with the pair 1/(pi(1+x^2)) and x/(pi(1+x^2)).
    Returns 0 for u = 0.
    """
    x = gp.x
    mean = integrate(state.u)
    bump = 1.0 / (math.pi * (1.0 + x**2))
    centered = state.u.values - mean * bump
    H_centered = state.Hu.values - mean * x * bump
    twice = ihilbert(Field(gp.grid, H_centered, Decay.algebraic(2)))
    inner = gp.grid.inner_mask()
    scale = np.linalg.norm(centered[inner])
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm((centered + twice.values)[inner]) / scale)


def smoothness_tail(sol: InterfaceSolution) -> float:
    """max |R_hat| over the top 20% of the band, relative to its peak."""
    spectrum = np.abs(np.fft.rfft(sol.R.values))
    peak = float(np.max(spectrum))
    if peak == 0.0:
        return 0.0
    cut = int(TAIL_FRACTION * spectrum.size)
    return float(np.max(spectrum[cut:]) / peak)


def interface_diagnostics(
    sol: InterfaceSolution, S: Field | None = None
) -> InterfaceDiagnostics:
    gp = sol.profile
    return InterfaceDiagnostics(
        epsilon=gp.epsilon,
        a=gp.a,
        angle_plus=sol.angle_plus,
        angle_minus=sol.angle_minus,
        power_fit=sol.power_fit,
        xfx=sol.xfx,
        antiderivative_error=sol.antiderivative_error,
        holomorphy_defect=holomorphy_defect(sol.state, gp),
        selfsimilar_residual=residual_selfsimilar(sol.state, gp, S),
        smoothness_tail=smoothness_tail(sol),
        U=residual_U(sol),
    )


@dataclass(frozen=True)
class ZValue:
    value: complex
    extended: bool


@dataclass(frozen=True)
class SpaceTimeEvaluator:
    """Off-grid eta by cubic splines on |x| <= L/2, power law beyond.

    The power law e^(i angle) amplitude |x|^a is matched to eta at the
    outermost inner nodes on each side, so eta is continuous at |x| = L/2.
    """

    epsilon: float
    a: float
    reach: float
    real: CubicSpline
    imag: CubicSpline
    amplitude_plus: float
    amplitude_minus: float
    angle_plus: float
    angle_minus: float

    @classmethod
    def from_solution(cls, sol: InterfaceSolution) -> SpaceTimeEvaluator:
        gp = sol.profile
        inner = gp.grid.inner_mask()
        x = gp.x[inner]
        eta = sol.eta[inner]
        a = gp.a
        angle_minus = float(np.angle(eta[0]))
        if angle_minus > 0.0:
            angle_minus -= 2.0 * math.pi
        return cls(
            epsilon=gp.epsilon,
            a=a,
            reach=float(min(-x[0], x[-1])),
            real=CubicSpline(x, eta.real),
            imag=CubicSpline(x, eta.imag),
            amplitude_plus=float(abs(eta[-1]) / x[-1] ** a),
            amplitude_minus=float(abs(eta[0]) / (-x[0]) ** a),
            angle_plus=float(np.angle(eta[-1])),
            angle_minus=angle_minus,
        )

    def eta(self, s: float) -> ZValue:
        if abs(s) <= self.reach:
            return ZValue(complex(self.real(s), self.imag(s)), False)
        if s > 0:
            amp, angle = self.amplitude_plus, self.angle_plus
        else:
            amp, angle = self.amplitude_minus, self.angle_minus
        ray = complex(math.cos(angle), math.sin(angle))
        value = amp * abs(s) ** self.a * ray
        return ZValue(value, True)


def corner(alpha: float, epsilon: float) -> complex:
    """Z(alpha, 0): rays at angles eps and -(pi + eps), modulus |alpha|^a."""
    a = 1.0 + 2.0 * epsilon / math.pi
    angle = epsilon if alpha >= 0 else -(math.pi + epsilon)
    return abs(alpha) ** a * complex(math.cos(angle), math.sin(angle))


def evaluate_Z(ev: SpaceTimeEvaluator, alpha: float, t: float) -> ZValue:
    """Z(alpha, t) = t^(1/3) eta(t^(-1/(3a)) alpha), and the corner at t = 0.

    ``extended`` is set when the rescaled point lies beyond L/2 and the
    power-law asymptote was used.

    Raises:
        ValueError: If t < 0.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return ZValue(corner(alpha, ev.epsilon), False)
    inner = ev.eta(t ** (-1.0 / (3.0 * ev.a)) * alpha)
    return ZValue(t ** (1.0 / 3.0) * inner.value, inner.extended)


@dataclass(frozen=True)
class InterfaceSnapshot:
    t: float
    alpha: np.ndarray
    Z: np.ndarray
    extended: np.ndarray


def sample_interface(
    ev: SpaceTimeEvaluator, times: list[float], alphas: np.ndarray
) -> list[InterfaceSnapshot]:
    """Z(., t) on ``alphas`` for each t."""
    alphas = np.asarray(alphas, dtype=float)
    snapshots = []
    for t in times:
        values = [evaluate_Z(ev, float(alpha), t) for alpha in alphas]
        snapshots.append(
            InterfaceSnapshot(
                t=t,
                alpha=alphas,
                Z=np.array([z.value for z in values]),
                extended=np.array([z.extended for z in values]),
            )
        )
    return snapshots
