"""Field serialization: CSV (x, re, im) and the RLF1 binary columnar dump."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .field import Decay, Field
from .grid import Grid

MAGIC = b"RLF1"
HEADER_DTYPE = np.dtype(
    [
        ("magic", "S4"),
        ("n_points", "<i8"),
        ("half_width", "<f8"),
        ("pad_factor", "<i8"),
    ]
)


def _columns(f: Field) -> np.ndarray:
    values = np.asarray(f.values, dtype=complex)
    return np.vstack([f.x, values.real, values.imag])


def _from_columns(grid: Grid, re: np.ndarray, im: np.ndarray, decay: Decay):
    values = re if not np.any(im) else re + 1j * im
    return Field(grid, values, decay)


def write_csv(f: Field, path: str | Path) -> Path:
    """Write columns x, re, im with a header row."""
    path = Path(path)
    np.savetxt(
        path,
        _columns(f).T,
        delimiter=",",
        header="x,re,im",
        comments="",
        fmt="%.17g",
    )
    return path


def read_csv(
    path: str | Path, pad_factor: int = 4, decay: Decay | None = None
) -> Field:
    """Read a CSV written by ``write_csv`` and rebuild its grid.

    Raises:
        ValueError: If the x column is not a uniform grid starting at -L.
    """
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ValueError(f"{path}: expected 3 columns, got {data.shape[1]}")
    x = data[:, 0]
    n = x.shape[0]
    grid = Grid(half_width=-float(x[0]), n_points=n, pad_factor=pad_factor)
    if not np.allclose(x, grid.nodes, rtol=0.0, atol=1e-9 * grid.half_width):
        raise ValueError(f"{path}: x column is not a uniform grid on [-L, L)")
    return _from_columns(
        grid, data[:, 1], data[:, 2], decay or Decay.schwartz_like()
    )


def write_binary(f: Field, path: str | Path) -> Path:
    """Little-endian header (magic, N, L, pad_factor) then x, re, im columns."""
    path = Path(path)
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = MAGIC
    header["n_points"] = f.grid.n_points
    header["half_width"] = f.grid.half_width
    header["pad_factor"] = f.grid.pad_factor
    with path.open("wb") as fh:
        fh.write(header.tobytes())
        fh.write(_columns(f).astype("<f8").tobytes())
    return path


def read_binary(path: str | Path, decay: Decay | None = None) -> Field:
    """Read an RLF1 dump written by ``write_binary``.

    Raises:
        ValueError: If the magic is wrong or the payload does not hold
            exactly three columns of N samples.
    """
    raw = Path(path).read_bytes()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise ValueError(f"{path}: truncated header ({len(raw)} bytes)")
    header = np.frombuffer(raw, dtype=HEADER_DTYPE, count=1)[0]
    if header["magic"] != MAGIC:
        raise ValueError(f"{path}: bad magic {header['magic']!r}")
    grid = Grid(
        half_width=float(header["half_width"]),
        n_points=int(header["n_points"]),
        pad_factor=int(header["pad_factor"]),
    )
    expected = 3 * grid.n_points * 8
    payload = len(raw) - HEADER_DTYPE.itemsize
    if payload != expected:
        raise ValueError(
            f"{path}: payload has {payload} bytes, header N={grid.n_points} "
            f"needs {expected}"
        )
    columns = np.frombuffer(
        raw, dtype="<f8", offset=HEADER_DTYPE.itemsize
    ).reshape(3, grid.n_points)
    return _from_columns(
        grid, columns[1], columns[2], decay or Decay.schwartz_like()
    )
