"""Linearized corner profile G, its Hilbert transform and the weight w.

G is the odd solution of iH G_xxx + (x / 3a) G_x = 0 tending to +-1, with

    G_x_hat(xi) = sqrt(2/pi) exp(-a |xi|^3),   a = 1 + 2 epsilon / pi.

iH G is not decaying. It is assembled from the split

    iH G = (1/pi) log(a^2 + x^2) + C + V,  C = log(1 + 2 epsilon/pi) / epsilon

where V = -int_x^inf v1 and v1 = iH G_x - (2/pi) x / (a^2 + x^2) decays like
x^-3. The constant makes w = exp(3 epsilon iH G) equal to
(1 + 2 epsilon/pi)^3 (a^2 + x^2)^(3 epsilon/pi) exp(3 epsilon V).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from protocol import GProfileSummary
from realline import (
    Decay,
    Field,
    Grid,
    cumulative_from_right,
    derivative,
    hilbert_derivative,
    ihilbert,
    integrate,
)

from .errors import ConsistencyFailure, EpsilonRejected
from .fourier import g_samples

logger = logging.getLogger(__name__)

EPSILON_LIMIT_THRESHOLD = 1e-8
CONSISTENCY_TOL = 1e-6
WEIGHT_BOUND_EXPONENT = 1.0 / 1000.0
WEIGHT_BOUND_CAP = 10.0


@dataclass(frozen=True)
class EpsilonParams:
    """epsilon and the profile exponent a = 1 + 2 epsilon / pi.

    Raises:
        EpsilonRejected: If a is outside (1/2, 3/2).
    """

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.5 < self.a < 1.5:
            raise EpsilonRejected(
                f"epsilon={self.epsilon:g} gives a={self.a:.6f} outside "
                "(1/2, 3/2)"
            )

    @property
    def a(self) -> float:
        return 1.0 + 2.0 * self.epsilon / math.pi

    @property
    def C_const(self) -> float:
        """(1/epsilon) log(1 + 2 epsilon/pi), with its limit 2/pi at 0."""
        eps = self.epsilon
        if abs(eps) < EPSILON_LIMIT_THRESHOLD:
            return 2.0 / math.pi
        return math.log1p(2.0 * eps / math.pi) / eps


@dataclass(frozen=True)
class GProfile:
    """G family on a grid, completed in stages by the build functions."""

    params: EpsilonParams
    grid: Grid
    G: Field
    G_x: Field
    G_xx: Field
    G_xxx: Field
    iHG_x: Field
    iHG_xx: Field
    v1: Field | None = None
    V: Field | None = None
    iHG: Field | None = None
    gamma_eps: Field | None = None
    w: Field | None = None
    C_growth: float | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def epsilon(self) -> float:
        return self.params.epsilon

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def C_const(self) -> float:
        return self.params.C_const

    @property
    def is_complete(self) -> bool:
        return self.w is not None

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def require_complete(self) -> None:
        if not self.is_complete:
            raise ValueError("profile is missing iH G and the weight")

    def sup_x_iHGx(self) -> float:
        return float(np.max(np.abs(self.x * self.iHG_x.values)))

    def weight_power(self, power: float) -> np.ndarray:
        """w^power, evaluated as exp(3 power epsilon iH G)."""
        self.require_complete()
        return np.exp(3.0 * power * self.epsilon * self.iHG.values)


def build_G(params: EpsilonParams, grid: Grid) -> GProfile:
    """Sample G, G_x, G_xx, G_xxx, iH G_x and iH G_xx on the grid.

    Raises:
        InsufficientPadding: If the grid has pad_factor < 2.
        QuadratureFailure: If the Fourier quadrature does not settle.
    """
    grid.require_padding("build_G")
    s = g_samples(grid.nodes, params.a)
    logger.info(
        "built G family eps=%g a=%.6f N=%d L=%g",
        params.epsilon,
        params.a,
        grid.n_points,
        grid.half_width,
    )
    return GProfile(
        params=params,
        grid=grid,
        G=Field(grid, s.G, Decay.bounded_nondecaying()),
        G_x=Field(grid, s.G_x, Decay.algebraic(4)),
        G_xx=Field(grid, s.G_xx, Decay.algebraic(5)),
        G_xxx=Field(grid, s.G_xxx, Decay.algebraic(6)),
        iHG_x=Field(grid, s.iHG_x, Decay.algebraic(1)),
        iHG_xx=Field(grid, s.iHG_xx, Decay.algebraic(2)),
    )


def build_iHG(gp: GProfile) -> GProfile:
    """Assemble iH G from the logarithmic split and cross-check it.

    Raises:
        ConsistencyFailure: If, on the inner half-domain, iH G_x from
            quadrature and the spectral iH(G_x) differ by more than 1e-6,
            or d/dx of the assembled split misses iH G_x by more than 1e-6.
    """
    x = gp.x
    a = gp.a
    grid = gp.grid
    log_slope = (2.0 / math.pi) * x / (a**2 + x**2)
    v1 = Field(grid, gp.iHG_x.values - log_slope, Decay.algebraic(3))
    V = cumulative_from_right(v1)
    V = V.with_values(V.values, Decay.algebraic(2))

    inner = grid.inner_mask()
    spectral = ihilbert(gp.G_x, taper=False).values
    mismatch = float(np.max(np.abs(spectral - gp.iHG_x.values)[inner]))
    if mismatch > CONSISTENCY_TOL:
        raise ConsistencyFailure(
            f"spectral iH(G_x) differs from quadrature by {mismatch:.3e}"
        )

    rebuilt = log_slope + derivative(V).values
    mismatch = float(np.max(np.abs(rebuilt - gp.iHG_x.values)[inner]))
    if mismatch > CONSISTENCY_TOL:
        raise ConsistencyFailure(
            f"d/dx of the log split misses iH G_x by {mismatch:.3e}"
        )

    iHG = (1.0 / math.pi) * np.log(a**2 + x**2) + gp.C_const + V.values
    return replace(
        gp,
        v1=v1,
        V=V,
        iHG=Field(grid, iHG, Decay.bounded_nondecaying()),
    )


def build_weight(gp: GProfile) -> Field:
    """w = exp(3 epsilon iH G), real and positive."""
    if gp.iHG is None:
        raise ValueError("build_iHG must run before build_weight")
    w = np.exp(3.0 * gp.epsilon * gp.iHG.values)
    return Field(gp.grid, w, Decay.bounded_nondecaying())


def weight_growth(w: Field) -> float:
    """C_growth = max over |x| >= 1 of |log w| / log(1 + x^2)."""
    x = w.x
    far = np.abs(x) >= 1.0
    ratio = np.abs(np.log(w.values[far])) / np.log1p(x[far] ** 2)
    return float(np.max(ratio)) if ratio.size else 0.0


def weight_bound_constant(gp: GProfile) -> float:
    """max |w|^(+-1) (1 + x^2)^(-1/1000) over the grid."""
    gp.require_complete()
    w = gp.w.values
    damping = (1.0 + gp.x**2) ** (-WEIGHT_BOUND_EXPONENT)
    return float(max(np.max(w * damping), np.max(damping / w)))


def weight_slope(gp: GProfile) -> np.ndarray:
    """w_x = 3 epsilon (iH G_x) w, exact for the closed-form weight."""
    gp.require_complete()
    return 3.0 * gp.epsilon * gp.iHG_x.values * gp.w.values


def weight_slope_constant(gp: GProfile) -> float:
    """Best K in |w_x| <= K |epsilon| (1 + x^2)^(-1/2 + C_growth).

    C_growth plays the part of C epsilon; 0 at epsilon = 0, where w_x = 0.
    """
    if gp.epsilon == 0.0:
        return 0.0
    x = gp.x
    envelope = (1.0 + x**2) ** (-0.5 + gp.C_growth)
    return float(
        np.max(np.abs(weight_slope(gp)) / (abs(gp.epsilon) * envelope))
    )


@dataclass(frozen=True)
class DifferenceQuotients:
    """Sup of the weight difference quotients over node pairs.

    ``w`` is sup |(w(x) - w(y)) / (x - y)|; ``xw`` is
    sup |(x w(x) - y w(y)) / (x - y)| / (1 + |x|^c + |y|^c) with
    c = 2 C_growth, the |x|^(C |epsilon|) growth allowance.
    """

    w: float
    xw: float
    n_nodes: int


def weight_difference_quotients(
    gp: GProfile, max_nodes: int = 512
) -> DifferenceQuotients:
    """Difference quotients of w and x w on an evenly thinned node set."""
    gp.require_complete()
    stride = max(1, math.ceil(gp.grid.n_points / max_nodes))
    x = gp.x[::stride]
    w = gp.w.values[::stride]
    dx = x[:, None] - x[None, :]
    off = dx != 0.0
    safe = np.where(off, dx, 1.0)
    slope_w = np.abs(w[:, None] - w[None, :]) / np.abs(safe)
    xw = x * w
    growth = np.abs(x) ** (2.0 * gp.C_growth)
    allowance = 1.0 + growth[:, None] + growth[None, :]
    slope_xw = np.abs(xw[:, None] - xw[None, :]) / np.abs(safe) / allowance
    return DifferenceQuotients(
        w=float(np.max(np.where(off, slope_w, 0.0))),
        xw=float(np.max(np.where(off, slope_xw, 0.0))),
        n_nodes=int(x.size),
    )


def build_profile(
    params: EpsilonParams, grid: Grid, epsilon_cap: float = 0.05
) -> GProfile:
    """Run build_G, build_iHG and build_weight, then the epsilon checks.

    |epsilon| above ``epsilon_cap`` is allowed but recorded as a warning.

    Raises:
        EpsilonRejected: If epsilon * sup |x iH G_x| >= 1/2.
        QuadratureFailure: If the Fourier quadrature does not settle.
        ConsistencyFailure: If the iH G cross-checks fail.
    """
    warnings: list[str] = []
    if abs(params.epsilon) > epsilon_cap:
        message = (
            f"|epsilon|={abs(params.epsilon):g} exceeds epsilon_cap="
            f"{epsilon_cap:g}; contraction is not expected to hold"
        )
        logger.warning(message)
        warnings.append(message)

    gp = build_iHG(build_G(params, grid))

    smallness = abs(params.epsilon) * gp.sup_x_iHGx()
    if smallness >= 0.5:
        raise EpsilonRejected(
            f"epsilon * sup|x iH G_x| = {smallness:.4f} is not below 1/2"
        )

    w = build_weight(gp)
    gamma = Field(
        grid,
        np.exp(params.epsilon * gp.iHG.values),
        Decay.bounded_nondecaying(),
    )
    gp = replace(
        gp,
        w=w,
        gamma_eps=gamma,
        C_growth=weight_growth(w),
        warnings=tuple(warnings),
    )

    bound = weight_bound_constant(gp)
    if bound > WEIGHT_BOUND_CAP:
        message = (
            f"weight bound constant {bound:.3f} exceeds {WEIGHT_BOUND_CAP:g}"
        )
        logger.warning(message)
        gp = replace(gp, warnings=gp.warnings + (message,))

    logger.info(
        "profile ready eps=%g C_growth=%.4f sup_x_iHGx=%.4f",
        params.epsilon,
        gp.C_growth,
        gp.sup_x_iHGx(),
    )
    return gp


def decay_envelope(
    f: Field | np.ndarray,
    exponent: float,
    x: np.ndarray | None = None,
    mask: np.ndarray | None = None,
) -> float:
    """sup (1 + x^2)^(exponent/2) |f| over the grid or a mask of it."""
    if isinstance(f, Field):
        values, x = f.values, f.x
    else:
        values = np.asarray(f)
    weighted = (1.0 + x**2) ** (exponent / 2.0) * np.abs(values)
    if mask is not None:
        weighted = weighted[mask]
    return float(np.max(weighted))


def linearized_residual(gp: GProfile) -> float:
    """||iH d^2 G_x + (x/3a) G_x||_2 / ||(x/3a) G_x||_2 on |x| <= L/2."""
    inner = gp.grid.inner_mask()
    transport = (gp.x / (3.0 * gp.a) * gp.G_x.values)[inner]
    dispersive = hilbert_derivative(gp.G_x, 2).values[inner]
    scale = np.linalg.norm(transport)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(dispersive + transport) / scale)


def profile_summary(gp: GProfile) -> GProfileSummary:
    gp.require_complete()
    G = gp.G.values
    return GProfileSummary(
        epsilon=gp.epsilon,
        a=gp.a,
        n_points=gp.grid.n_points,
        half_width=gp.grid.half_width,
        integral_Gx=integrate(gp.G_x),
        oddness=float(np.max(np.abs(G[1:] + G[:0:-1]))),
        G_limits=(float(G[0]), float(G[-1])),
        C_const=gp.C_const,
        C_growth=gp.C_growth,
        sup_x_iHGx=gp.sup_x_iHGx(),
        linearized_residual=linearized_residual(gp),
        weight_bound_constant=weight_bound_constant(gp),
        decay_envelopes={
            "G_x": decay_envelope(gp.G_x, 3.0),
            "G_xx": decay_envelope(gp.G_xx, 4.0),
            "G_xxx": decay_envelope(gp.G_xxx, 5.0),
            "iHG_x": decay_envelope(gp.iHG_x, 1.0),
            "iHG_xx": decay_envelope(gp.iHG_xx, 2.0),
        },
    )
