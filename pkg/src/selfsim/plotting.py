"""SVG snapshots of the interface Z(., t)."""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from heleshaw import (  # noqa: E402
    InterfaceSolution,
    SpaceTimeEvaluator,
    sample_interface,
)

logger = logging.getLogger(__name__)

N_ALPHA = 401


def plot_interface(
    sol: InterfaceSolution,
    times: list[float],
    path: Path,
    span: float | None = None,
) -> Path:
    """Plot Z(alpha, t) for t = 0 and each of ``times``.

    Points evaluated on the power-law asymptote are drawn dashed.

    Args:
        sol: Reconstructed interface
        times: Non-negative times
        path: Output .svg file
        span: Half-width of the alpha range; defaults to L/4

    Returns:
        The written path
    """
    ev = SpaceTimeEvaluator.from_solution(sol)
    span = span or 0.5 * ev.reach
    alphas = np.linspace(-span, span, N_ALPHA)
    snapshots = sample_interface(ev, sorted({0.0, *times}), alphas)

    fig, ax = plt.subplots(figsize=(7, 4))
    for snap in snapshots:
        grid_part = np.where(snap.extended, np.nan, snap.Z)
        far_part = np.where(snap.extended, snap.Z, np.nan)
        (line,) = ax.plot(
            grid_part.real, grid_part.imag, label=f"t = {snap.t:g}"
        )
        if snap.extended.any():
            ax.plot(
                far_part.real,
                far_part.imag,
                linestyle="--",
                color=line.get_color(),
            )
    ax.set_xlabel("Re Z")
    ax.set_ylabel("Im Z")
    ax.set_title(f"epsilon = {ev.epsilon:g}, a = {ev.a:.6f}")
    ax.legend()
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    logger.info("plot path=%s times=%s", path, [s.t for s in snapshots])
    return path
