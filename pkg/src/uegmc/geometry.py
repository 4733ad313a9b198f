"""Periodic cubic box arithmetic: sizing, wrapping, minimum image."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Box:
    """Cubic periodic box of side ``length`` (bohr).

    Wrapped coordinates live in [0, L); minimum-image displacement
    components live in [-L/2, L/2).
    """

    length: float

    def __post_init__(self):
        if not np.isfinite(self.length) or self.length <= 0.0:
            raise ValueError(f"box length must be finite and positive, got {self.length}")


def box_length(n_electrons: int, density: float) -> float:
    """Side of the cubic box holding ``n_electrons`` at uniform ``density``, L = (N/rho)^(1/3)."""
    if n_electrons < 2:
        raise ValueError(f"need at least 2 electrons, got {n_electrons}")
    if not np.isfinite(density) or density <= 0.0:
        raise ValueError(f"density must be positive, got {density}")
    return float((n_electrons / density) ** (1.0 / 3.0))


def wrap(position, box: Box):
    """Map coordinates componentwise into [0, L) by periodicity."""
    pos = np.asarray(position, dtype=np.float64)
    length = box.length
    out = pos - length * np.floor(pos / length)
    # guard: x = -tiny can round to exactly L
    return np.where(out >= length, out - length, out)


def minimum_image(displacement, box: Box):
    """Nearest-image displacement, each component mapped into [-L/2, L/2).

    Components exactly at +L/2 map to -L/2 (left-closed convention).
    """
    disp = np.asarray(displacement, dtype=np.float64)
    length = box.length
    out = disp - length * np.floor(disp / length + 0.5)
    half = 0.5 * length
    # rounding in disp/length can leave a component an ulp outside the window
    out = np.where(out >= half, out - length, out)
    return np.where(out < -half, out + length, out)
