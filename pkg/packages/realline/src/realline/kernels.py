"""Toeplitz kernels of band-limited operators on a uniform grid.

A field sampled at x_j = -L + j*h is identified with its sinc interpolant.
An operator with Fourier symbol sigma(xi) then acts on the samples by the
discrete convolution

    (T f)_j = sum_k c_{j-k} f_k,
    c_m = (1/2pi) int_{-pi}^{pi} sigma(theta/h) exp(i m theta) dtheta,

which is exact on the whole real line, with no periodic wrap-around. The
kernels below reduce to the Fourier moments

    C_n(m) = int_0^pi theta^n cos(m theta) dtheta
    S_n(m) = int_0^pi theta^n sin(m theta) dtheta

which have closed forms for integer n and are computed by QUADPACK's
cosine-weighted rule otherwise.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.linalg import toeplitz

logger = logging.getLogger(__name__)


class KernelKind(str, Enum):
    """Operator families with closed-form kernels."""

    DERIVATIVE = "derivative"  # d^n/dx^n, symbol (i xi)^n
    HILBERT_DERIVATIVE = "hilbert_derivative"  # iH d^n
    FRACTIONAL = "fractional"  # |D|^s, symbol |xi|^s


def integer_moments(order: int, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (C_order(m), S_order(m)) for integer lags m.

    Args:
        order: Power of theta, 0..8.
        m: Integer lags, any sign.

    Returns:
        Cosine and sine moments with the parity of m applied.
    """
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    m = np.asarray(m, dtype=np.int64)
    mabs = np.abs(m).astype(float)
    zero = mabs == 0
    safe = np.where(zero, 1.0, mabs)
    alt = np.where(np.abs(m) % 2 == 0, 1.0, -1.0)

    c = np.zeros_like(safe)
    s = (1.0 - alt) / safe
    for k in range(1, order + 1):
        c, s = -(k / safe) * s, -(math.pi**k) * alt / safe + (k / safe) * c

    c = np.where(zero, math.pi ** (order + 1) / (order + 1), c)
    s = np.where(zero, 0.0, s)
    return c, np.sign(m) * s


def _fractional_cosine_moment(s: float, m: int) -> float:
    if m == 0:
        return math.pi ** (s + 1.0) / (s + 1.0)
    value, _ = integrate.quad(
        lambda t: t**s,
        0.0,
        math.pi,
        weight="cos",
        wvar=float(m),
        epsabs=1e-14,
        epsrel=1e-12,
        limit=200,
    )
    return value


@lru_cache(maxsize=32)
def _fractional_moments(s: float, n_points: int) -> np.ndarray:
    logger.debug("fractional moments s=%g n=%d", s, n_points)
    lags = np.arange(n_points)
    values = np.array([_fractional_cosine_moment(s, int(m)) for m in lags])
    # C_s(m) is even in m
    full = np.concatenate([values[:0:-1], values])
    full.flags.writeable = False
    return full


@lru_cache(maxsize=128)
def kernel(
    kind: KernelKind, order: float, n_points: int, spacing: float
) -> np.ndarray:
    """Kernel values c_m for m = -(N-1)..N-1, stored at index m + N - 1.

    Args:
        kind: Operator family.
        order: Derivative order n, or the exponent s for |D|^s.
        n_points: Grid size N.
        spacing: Grid spacing h.

    Returns:
        Read-only array of length 2N - 1.
    """
    m = np.arange(-(n_points - 1), n_points)
    integral = float(order).is_integer()

    if kind is KernelKind.FRACTIONAL:
        if order < 0:
            raise ValueError(f"exponent must be non-negative, got {order}")
        if integral:
            c, _ = integer_moments(int(order), m)
        else:
            c = _fractional_moments(float(order), n_points)
        values = c / math.pi
    else:
        if not integral or order < 0:
            raise ValueError(
                f"order must be a non-negative integer, got {order}"
            )
        n = int(order)
        c, s = integer_moments(n, m)
        if kind is KernelKind.DERIVATIVE:
            if n % 2 == 0:
                values = (-1) ** (n // 2) * c / math.pi
            else:
                values = (-1) ** ((n + 1) // 2) * s / math.pi
        else:
            if n % 2 == 0:
                values = (-1) ** (n // 2) * s / math.pi
            else:
                values = -((-1) ** ((n + 1) // 2)) * c / math.pi

    values = np.asarray(values, dtype=float) * spacing ** (-float(order))
    values.flags.writeable = False
    return values


@lru_cache(maxsize=128)
def kernel_spectrum(
    kind: KernelKind,
    order: float,
    n_points: int,
    spacing: float,
    padded_size: int,
) -> np.ndarray:
    """Real FFT of the kernel laid out for linear convolution of length M."""
    if padded_size < 2 * n_points - 1:
        raise ValueError(
            f"padded size {padded_size} too small for linear convolution "
            f"of {n_points} points; use pad_factor >= 2"
        )
    c = kernel(kind, order, n_points, spacing)
    circ = np.zeros(padded_size)
    m = np.arange(-(n_points - 1), n_points)
    circ[m % padded_size] = c
    spectrum = np.fft.rfft(circ)
    spectrum.flags.writeable = False
    return spectrum


def convolve(
    values: np.ndarray, spectrum: np.ndarray, padded_size: int
) -> np.ndarray:
    """Apply a kernel spectrum to N samples; complex input is split."""
    n = values.shape[0]
    if np.iscomplexobj(values):
        return convolve(values.real, spectrum, padded_size) + 1j * convolve(
            values.imag, spectrum, padded_size
        )
    transformed = np.fft.rfft(values, n=padded_size) * spectrum
    return np.fft.irfft(transformed, n=padded_size)[:n]


def toeplitz_matrix(
    kind: KernelKind, order: float, n_points: int, spacing: float
) -> np.ndarray:
    """Dense N x N matrix T with T[j, k] = c_{j-k}."""
    c = kernel(kind, order, n_points, spacing)
    mid = n_points - 1
    return toeplitz(c[mid:], c[mid::-1])
