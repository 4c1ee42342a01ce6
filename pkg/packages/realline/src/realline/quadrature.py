"""Integrals of decaying fields with power-law tail corrections."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import sici

from .errors import NonIntegrableTail
from .field import Decay, DecayKind, Field
from .kernels import convolve

_MEAN_ZERO_RTOL = 1e-9


def _require_integrable(f: Field, operation: str) -> float:
    decay = f.decay
    if not decay.is_decaying or decay.exponent <= 1.0:
        raise NonIntegrableTail(
            f"{operation} needs decay faster than 1/|x|, got {decay}"
        )
    return decay.exponent


def _tail(value: complex, node: float, start: float, p: float) -> complex:
    """int_start^inf value * (node / x)^p dx."""
    return value * abs(node) ** p * start ** (1.0 - p) / (p - 1.0)


def _tails(f: Field, p: float) -> tuple[complex, complex]:
    if math.isinf(p):
        return 0.0, 0.0
    grid = f.grid
    x = grid.nodes
    h = grid.spacing
    left = _tail(f.values[0], x[0], grid.half_width + 0.5 * h, p)
    right = _tail(f.values[-1], x[-1], grid.half_width - 0.5 * h, p)
    return left, right


def integrate(f: Field) -> float | complex:
    """Integral over the real line.

    The grid sum h * sum(f) covers [-L - h/2, L - h/2]; the remainder is
    extrapolated from the end samples with the tagged algebraic exponent.

    Raises:
        NonIntegrableTail: If the tag is bounded_nondecaying or p <= 1.
    """
    p = _require_integrable(f, "integrate")
    left, right = _tails(f, p)
    total = f.grid.spacing * np.sum(f.values) + left + right
    if f.is_real:
        return float(np.real(total))
    return complex(total)


@lru_cache(maxsize=16)
def _right_integral_spectrum(
    n_points: int, spacing: float, padded_size: int
) -> np.ndarray:
    # int_{x_j}^inf of the sinc centred at x_k: h (1/2 - Si(pi (j-k)) / pi)
    m = np.arange(-(n_points - 1), n_points)
    si, _ = sici(math.pi * m)
    c = spacing * (0.5 - si / math.pi)
    circ = np.zeros(padded_size)
    circ[m % padded_size] = c
    spectrum = np.fft.rfft(circ)
    spectrum.flags.writeable = False
    return spectrum


def cumulative_from_right(f: Field) -> Field:
    """Return x -> -int_x^inf f(y) dy.

    The sinc interpolant is integrated exactly with the sine integral and
    the right tail beyond the grid is added from the decay tag. The
    result is tagged algebraic(p - 1) when f has zero integral, otherwise
    bounded_nondecaying.

    Raises:
        NonIntegrableTail: If the tag is bounded_nondecaying or p <= 1.
    """
    p = _require_integrable(f, "cumulative_from_right")
    grid = f.grid
    grid.require_padding("cumulative_from_right")
    spectrum = _right_integral_spectrum(
        grid.n_points, grid.spacing, grid.padded_size
    )
    _, right = _tails(f, p)
    values = -(convolve(f.values, spectrum, grid.padded_size) + right)

    total = integrate(f)
    scale = grid.spacing * np.sum(np.abs(f.values))
    if abs(total) <= _MEAN_ZERO_RTOL * max(scale, 1e-300):
        decay = (
            Decay.schwartz_like()
            if f.decay.kind is DecayKind.SCHWARTZ_LIKE
            else Decay.algebraic(p - 1.0)
        )
    else:
        decay = Decay.bounded_nondecaying()
    return f.with_values(values, decay)
