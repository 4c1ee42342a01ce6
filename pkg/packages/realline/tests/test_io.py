"""Tests for CSV and RLF1 field serialization."""

from __future__ import annotations

import numpy as np
import pytest

from realline import Field, Grid, read_binary, read_csv, write_binary, write_csv


@pytest.fixture
def complex_field() -> Field:
    grid = Grid(half_width=8.0, n_points=64, pad_factor=2)
    x = grid.nodes
    return Field(grid, np.exp(-(x**2)) + 1j * x * np.exp(-(x**2)))


def test_csv_has_header_and_three_columns(tmp_path, complex_field):
    """Test the CSV layout is x, re, im with a header row."""
    path = write_csv(complex_field, tmp_path / "f.csv")

    lines = path.read_text().splitlines()

    assert lines[0] == "x,re,im"
    assert len(lines) == 65
    assert len(lines[1].split(",")) == 3


def test_csv_read_restores_grid_and_values(tmp_path, complex_field):
    """Test reading a CSV rebuilds the grid and the samples."""
    path = write_csv(complex_field, tmp_path / "f.csv")

    restored = read_csv(path, pad_factor=2)

    assert restored.grid == complex_field.grid
    assert np.array_equal(restored.values, complex_field.values)


def test_csv_read_of_real_field_stays_real(tmp_path):
    """Test a field with zero imaginary column is read back as real."""
    grid = Grid(half_width=4.0, n_points=16)
    path = write_csv(Field(grid, np.cos(grid.nodes)), tmp_path / "r.csv")

    assert read_csv(path).is_real


def test_binary_header_layout(tmp_path, complex_field):
    """Test the binary dump starts with RLF1, N, L and pad_factor."""
    path = write_binary(complex_field, tmp_path / "f.rlf")

    raw = path.read_bytes()

    assert raw[:4] == b"RLF1"
    assert int.from_bytes(raw[4:12], "little") == 64
    assert np.frombuffer(raw[12:20], "<f8")[0] == 8.0
    assert int.from_bytes(raw[20:28], "little") == 2
    assert len(raw) == 28 + 3 * 64 * 8


def test_binary_read_restores_field(tmp_path, complex_field):
    """Test reading the binary dump restores grid and samples exactly."""
    path = write_binary(complex_field, tmp_path / "f.rlf")

    restored = read_binary(path)

    assert restored.grid == complex_field.grid
    assert np.array_equal(restored.values, complex_field.values)


def test_binary_rejects_bad_magic(tmp_path, complex_field):
    """Test a corrupted magic string is rejected."""
    path = write_binary(complex_field, tmp_path / "f.rlf")
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))

    with pytest.raises(ValueError, match="bad magic"):
        read_binary(path)


@pytest.mark.parametrize("cut", [8, 3 * 64 * 8 + 8])
def test_binary_rejects_short_payload(tmp_path, complex_field, cut):
    """Test a dump missing samples or its header is rejected."""
    path = write_binary(complex_field, tmp_path / "f.rlf")
    raw = path.read_bytes()
    path.write_bytes(raw[:-cut])

    with pytest.raises(ValueError, match="payload|truncated"):
        read_binary(path)


def test_binary_rejects_trailing_bytes(tmp_path, complex_field):
    """Test a payload longer than the header's N is rejected."""
    path = write_binary(complex_field, tmp_path / "f.rlf")
    path.write_bytes(path.read_bytes() + b"\0" * 8)

    with pytest.raises(ValueError, match="needs 1536"):
        read_binary(path)
