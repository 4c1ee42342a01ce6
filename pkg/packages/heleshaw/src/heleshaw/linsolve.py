"""The linear operator L v = iH v_xxx + w (x/3a) v_x and its norms.

Since iH d^3 = -|D|^3, L v = -|D|^3 v + w (x/3a) v_x. The regularized
operator adds delta * d/dx(w x^2 d/dx v), discretized by a symmetric
difference with midpoint averages of w x^2; samples outside the grid are
zero.

The assembled matrix and ``apply_L`` both use the untapered Toeplitz
kernels, so they agree to rounding.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve
from scipy.sparse.linalg import LinearOperator as MatrixFreeOperator
from scipy.sparse.linalg import gmres

from protocol import NormReport
from realline import (
    Decay,
    Field,
    derivative,
    fractional_D,
    sobolev_seminorm,
)
from realline.kernels import KernelKind, toeplitz_matrix

from .errors import BoundViolation, NoConvergence, SingularSystem
from .gprofile import GProfile

logger = logging.getLogger(__name__)

PIVOT_RTOL = 1e-13
RETRY_DELTA = 1e-6
GMRES_RTOL = 1e-10
GMRES_RESTART = 1024
GMRES_MAXITER = 20

SolveMethod = Literal["lu", "gmres"]


@dataclass(frozen=True)
class LinearOperator:
    """L_delta on the profile's grid.

    ``matrix`` and ``lu`` are None for the matrix-free GMRES path.
    """

    profile: GProfile
    delta: float
    method: SolveMethod = "lu"
    matrix: np.ndarray | None = None
    lu: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def grid(self):
        return self.profile.grid

    @property
    def transport(self) -> np.ndarray:
        """w x / (3a), the coefficient of v_x."""
        gp = self.profile
        return gp.w.values * gp.x / (3.0 * gp.a)


def _face_coefficients(gp: GProfile) -> np.ndarray:
    """w x^2 averaged to the N + 1 cell faces, zero beyond the grid."""
    p = gp.w.values * gp.x**2
    padded = np.concatenate([[0.0], p, [0.0]])
    return 0.5 * (padded[1:] + padded[:-1])


def _regularization(values: np.ndarray, faces: np.ndarray, h: float):
    padded = np.concatenate([[0.0], values, [0.0]])
    flux = faces * np.diff(padded)
    return np.diff(flux) / h**2


def _regularization_matrix(faces: np.ndarray, h: float) -> np.ndarray:
    lower, upper = faces[:-1], faces[1:]
    matrix = np.diag(-(lower + upper))
    matrix += np.diag(upper[:-1], 1) + np.diag(lower[1:], -1)
    return matrix / h**2


def _pivot_ok(lu: np.ndarray, matrix: np.ndarray) -> bool:
    scale = np.linalg.norm(matrix, np.inf)
    return float(np.min(np.abs(np.diag(lu)))) >= PIVOT_RTOL * scale


def assemble(
    gp: GProfile,
    delta: float = 0.0,
    method: SolveMethod = "lu",
    retry: bool = True,
) -> LinearOperator:
    """Build L_delta and, for the LU path, factor it once.

    A near-singular LU at delta = 0 is retried with delta = 1e-6.

    Raises:
        SingularSystem: If the factorization still has a pivot below
            1e-13 * ||A||_inf.
    """
    gp.require_complete()
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    if method == "gmres":
        return LinearOperator(profile=gp, delta=delta, method="gmres")
    if method != "lu":
        raise ValueError(f"unknown solve method {method!r}")

    grid = gp.grid
    n, h = grid.n_points, grid.spacing
    transport = gp.w.values * gp.x / (3.0 * gp.a)
    matrix = -toeplitz_matrix(KernelKind.FRACTIONAL, 3, n, h)
    matrix += transport[:, None] * toeplitz_matrix(
        KernelKind.DERIVATIVE, 1, n, h
    )
    if delta > 0:
        matrix += delta * _regularization_matrix(_face_coefficients(gp), h)

    lu = lu_factor(matrix, check_finite=False)
    if not _pivot_ok(lu[0], matrix):
        if retry and delta == 0.0:
            logger.warning(
                "near-singular system at delta=0; retrying delta=%g",
                RETRY_DELTA,
            )
            return assemble(gp, RETRY_DELTA, method, retry=False)
        raise SingularSystem(
            f"LU pivot below {PIVOT_RTOL:g} * ||A|| (N={n}, delta={delta:g})"
        )
    logger.info("assembled L N=%d delta=%g", n, delta)
    return LinearOperator(
        profile=gp, delta=delta, method="lu", matrix=matrix, lu=lu
    )


def _apply_values(values: np.ndarray, op: LinearOperator) -> np.ndarray:
    gp = op.profile
    v = Field(gp.grid, values, Decay.algebraic(2))
    out = -fractional_D(v, 3, taper=False).values
    out = out + op.transport * derivative(v, 1, taper=False).values
    if op.delta > 0:
        out = out + op.delta * _regularization(
            values, _face_coefficients(gp), gp.grid.spacing
        )
    return out


def apply_L(v: Field, op: LinearOperator) -> Field:
    """Return -|D|^3 v + w (x/3a) v_x (+ the delta term).

    Raises:
        NonDecayingInput: If v is tagged bounded_nondecaying.
    """
    v.require_decaying("apply_L")
    v.require_same_grid(op.profile.G)
    return v.with_values(_apply_values(v.values, op), v.decay.capped(4.0))


def _check_rhs(F: Field, gp: GProfile) -> None:
    weighted = F.values / np.sqrt(gp.w.values)
    if not (math.isfinite(F.l2_norm()) and np.all(np.isfinite(weighted))):
        raise ValueError("right-hand side is not finite in discrete L^2")


def _gmres_preconditioner(op: LinearOperator) -> MatrixFreeOperator:
    # periodic inverse of -(|xi|^3 + 1) on the padded grid
    grid = op.grid
    n, m = grid.n_points, grid.padded_size
    symbol = -(np.abs(grid.frequencies()) ** 3 + 1.0)

    def matvec(r: np.ndarray) -> np.ndarray:
        r = np.ravel(r)
        return np.fft.irfft(np.fft.rfft(r, n=m) / symbol, n=m)[:n]

    return MatrixFreeOperator((n, n), matvec=matvec, dtype=float)


def solve_L(F: Field, op: LinearOperator) -> Field:
    """Solve L_delta v = F.

    Raises:
        ValueError: If F or w^(-1/2) F is not finite.
        NoConvergence: If GMRES does not reach its tolerance.
    """
    gp = op.profile
    F.require_same_grid(gp.G)
    _check_rhs(F, gp)
    if not F.is_real:
        re = solve_L(F.real, op)
        return re.with_values(re.values + 1j * solve_L(F.imag, op).values)
    if not np.any(F.values):
        return F.with_values(np.zeros(gp.grid.n_points), Decay.algebraic(2))

    if op.method == "lu":
        values = lu_solve(op.lu, F.values, check_finite=False)
    else:
        n = gp.grid.n_points
        A = MatrixFreeOperator(
            (n, n), matvec=lambda v: _apply_values(np.ravel(v), op), dtype=float
        )
        values, info = gmres(
            A,
            F.values,
            rtol=GMRES_RTOL,
            restart=min(n, GMRES_RESTART),
            maxiter=GMRES_MAXITER,
            M=_gmres_preconditioner(op),
        )
        if info != 0:
            raise NoConvergence(f"GMRES stopped with info={info}")
    return Field(gp.grid, values, Decay.algebraic(2))


def relative_residual(v: Field, F: Field, op: LinearOperator) -> float:
    """||L v - F||_2 / ||F||_2, or ||L v||_2 when F vanishes."""
    Lv = apply_L(v, op)
    scale = F.l2_norm()
    if scale == 0.0:
        return Lv.l2_norm()
    return Lv.with_values(Lv.values - F.values).l2_norm() / scale


def _weighted_l2(values: np.ndarray, weight: np.ndarray, h: float) -> float:
    return float(math.sqrt(h * np.sum(weight * np.abs(values) ** 2)))


def norms(v: Field, gp: GProfile) -> NormReport:
    """L^2_w norms of v and x v_x, H^1 and H^3 seminorms, and their sum."""
    v.require_decaying("norms")
    h = gp.grid.spacing
    w = gp.w.values
    v_x = derivative(v, 1, taper=False).values
    return NormReport.from_components(
        l2w=_weighted_l2(v.values, w, h),
        xl2w=_weighted_l2(gp.x * v_x, w, h),
        h1=sobolev_seminorm(v, 1.0),
        h3=sobolev_seminorm(v, 3.0),
    )


def xnorm(v: Field, gp: GProfile) -> float:
    return norms(v, gp).xnorm


@dataclass(frozen=True)
class NormEquivalence:
    """int v^2 (x w)_x / ||v||^2_{L^2_w} and the bracket it must lie in."""

    ratio: float
    lower: float
    upper: float


def check_norm_equivalence(v: Field, gp: GProfile) -> NormEquivalence:
    """Compare int v^2 (x w)_x with ||v||^2_{L^2_w}.

    Uses (x w)_x = w (1 + 3 epsilon x iH G_x).

    Raises:
        BoundViolation: If the ratio leaves
            [1 - 3 eps sup|x iH G_x|, 1 + 3 eps sup|x iH G_x|].
    """
    v.require_decaying("check_norm_equivalence")
    w = gp.w.values
    v2 = np.abs(v.values) ** 2
    denominator = np.sum(w * v2)
    if denominator == 0.0:
        return NormEquivalence(1.0, 1.0, 1.0)
    xw_x = w * (1.0 + 3.0 * gp.epsilon * gp.x * gp.iHG_x.values)
    ratio = float(np.sum(xw_x * v2) / denominator)
    width = 3.0 * abs(gp.epsilon) * gp.sup_x_iHGx()
    result = NormEquivalence(ratio, 1.0 - width, 1.0 + width)
    if not result.lower - 1e-12 <= ratio <= result.upper + 1e-12:
        raise BoundViolation(
            f"norm ratio {ratio:.6f} outside [{result.lower:.6f}, "
            f"{result.upper:.6f}]"
        )
    return result


def bilinear_form(v: Field, op: LinearOperator) -> float:
    """B_delta(v, v) = -h sum (L_delta v) v."""
    return float(-op.grid.spacing * np.sum(apply_L(v, op).values * v.values))


def random_test_fields(
    gp: GProfile, count: int, seed: int = 0, bumps: int = 4
) -> list[Field]:
    """Sums of randomly placed Gaussian bumps, decaying and real."""
    rng = np.random.default_rng(seed)
    x = gp.x
    fields = []
    for _ in range(count):
        values = np.zeros_like(x)
        for _ in range(bumps):
            center = rng.uniform(-10.0, 10.0)
            width = rng.uniform(0.5, 3.0)
            values += rng.normal() * np.exp(-((x - center) ** 2) / width**2)
        fields.append(Field(gp.grid, values, Decay.schwartz_like()))
    return fields


def coercivity_constant(
    op: LinearOperator, samples: int = 8, seed: int = 0
) -> float:
    """Fitted c in B_delta(v, v) >= ||D|^(3/2) v||^2 + c ||v||^2_{L^2_w}."""
    gp = op.profile
    h = gp.grid.spacing
    best = math.inf
    for v in random_test_fields(gp, samples, seed):
        dispersive = sobolev_seminorm(v, 1.5) ** 2
        weighted = _weighted_l2(v.values, gp.w.values, h) ** 2
        best = min(best, (bilinear_form(v, op) - dispersive) / weighted)
    return float(best)


def solution_bound(v: Field, F: Field, gp: GProfile) -> float | None:
    """K = ||v||_X / (||F||_2 + ||w^(-1/2) F||_2), None when F = 0."""
    h = gp.grid.spacing
    scale = F.l2_norm() + _weighted_l2(F.values, 1.0 / gp.w.values, h)
    if scale == 0.0:
        return None
    return xnorm(v, gp) / scale


def condition_estimate(op: LinearOperator) -> float | None:
    """1-norm condition number estimate from the LU factors."""
    if op.lu is None:
        return None
    anorm = float(np.linalg.norm(op.matrix, 1))
    rcond, info = lapack.dgecon(op.lu[0], anorm, norm="1")
    if info != 0 or rcond == 0.0:
        return math.inf
    return float(1.0 / rcond)
