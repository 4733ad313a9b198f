"""Physics kernel for the uniform interacting spinless electron gas.

A configuration is an (N, 3) array of wrapped positions in atomic units;
row 0 is the conditioned electron whose gradient enters the Fisher term.
Configurations are weighted by exp(-sum of coupling * pair_energy) over
all pairs, where pairs involving electron 0 carry ``gamma`` and the
remaining pairs carry ``beta`` (equal to ``gamma`` unless overridden).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Box, box_length, minimum_image

# Pair distances below this are treated as coincident: the weight vanishes
# there, so proposals that close in beyond the guard are certainly rejected.
HARD_CORE_RADIUS = 1e-9


class SingularityError(ValueError):
    """A pair distance fell inside the hard-core guard."""


@dataclass(frozen=True)
class GasParams:
    """System definition: N electrons at uniform density in a periodic cube.

    ``gamma`` couples every pair involving electron 0; ``beta`` couples the
    remaining pairs and defaults to ``gamma``.
    """

    n_electrons: int
    density: float
    gamma: float
    beta: float | None = None
    box: Box = field(init=False)

    def __post_init__(self):
        if self.gamma < 0.0 or not np.isfinite(self.gamma):
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if self.beta is not None and (self.beta < 0.0 or not np.isfinite(self.beta)):
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        object.__setattr__(self, "box", Box(box_length(self.n_electrons, self.density)))

    @property
    def effective_beta(self) -> float:
        return self.gamma if self.beta is None else self.beta


def pair_energy(ri, rj, params: GasParams) -> float:
    """Pair pseudo-energy rho^2 / d with the minimum-image distance d."""
    delta = minimum_image(np.asarray(ri, dtype=np.float64) - np.asarray(rj, dtype=np.float64), params.box)
    d = float(np.sqrt(delta @ delta))
    if d < HARD_CORE_RADIUS:
        raise SingularityError(f"pair distance {d} below hard-core guard {HARD_CORE_RADIUS}")
    return params.density**2 / d


def _pair_table(positions: np.ndarray, params: GasParams):
    """Minimum-image displacement table and distances for all pairs (i, j)."""
    delta = minimum_image(positions[:, None, :] - positions[None, :, :], params.box)
    d = np.sqrt(np.einsum("ijk,ijk->ij", delta, delta))
    return delta, d


def _check_distances(d: np.ndarray):
    n = d.shape[0]
    off = ~np.eye(n, dtype=bool)
    if np.any(d[off] < HARD_CORE_RADIUS):
        raise SingularityError("configuration contains a near-coincident electron pair")


def log_f_ratio(positions: np.ndarray, moved_index: int, new_position, params: GasParams) -> float:
    """log of the configuration-weight ratio for moving one electron.

    Sums -coupling * rho^2 * (1/d_new - 1/d_old) over the N-1 pairs that
    involve the moved electron; the coupling is ``gamma`` for pairs touching
    electron 0 and ``beta`` otherwise.  Returns -inf when the proposed
    position lands inside the hard-core guard of another electron.
    """
    n = positions.shape[0]
    if not 0 <= moved_index < n:
        raise ValueError(f"moved_index {moved_index} out of range for {n} electrons")
    new_position = np.asarray(new_position, dtype=np.float64)
    others = np.arange(n) != moved_index

    d_old = _distances_to(positions[others], positions[moved_index], params.box)
    d_new = _distances_to(positions[others], new_position, params.box)
    if np.any(d_new < HARD_CORE_RADIUS):
        return -np.inf

    gamma, beta = params.gamma, params.effective_beta
    coupling = np.full(n - 1, beta)
    if moved_index == 0:
        coupling[:] = gamma
    else:
        coupling[0] = gamma  # slot 0 of `others` is electron 0
    rho2 = params.density**2
    return float(np.sum(-coupling * rho2 * (1.0 / d_new - 1.0 / d_old)))


def _distances_to(positions: np.ndarray, point: np.ndarray, box: Box) -> np.ndarray:
    delta = minimum_image(positions - point, box)
    return np.sqrt(np.einsum("ij,ij->i", delta, delta))


def fisher_summand(positions: np.ndarray, params: GasParams) -> float:
    """(gamma^2/8) |sum over n of grad_1 pair_energy(r_1, r_n)|^2.

    The gradient of the pair energy with respect to electron 0 is
    -rho^2 * u / d^2 with u the unit minimum-image vector from r_n to r_1;
    the normalization exponent contributes nothing for the uniform gas
    (it is independent of r_1 by translational symmetry).
    """
    delta = minimum_image(positions[0] - positions[1:], params.box)
    d = np.sqrt(np.einsum("ij,ij->i", delta, delta))
    if np.any(d < HARD_CORE_RADIUS):
        raise SingularityError("electron 0 nearly coincides with another electron")
    rho2 = params.density**2
    grad = -(rho2 * delta / d[:, None] ** 3).sum(axis=0)
    return params.gamma**2 / 8.0 * float(grad @ grad)


def coulomb_summand(positions: np.ndarray, params: GasParams) -> float:
    """(1/N) * sum over distinct pairs of 1/d, minimum-image distances."""
    _, d = _pair_table(positions, params)
    _check_distances(d)
    iu = np.triu_indices(positions.shape[0], k=1)
    return float(np.sum(1.0 / d[iu])) / params.n_electrons
