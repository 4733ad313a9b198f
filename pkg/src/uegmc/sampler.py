"""Metropolis Markov chain over electron configurations.

Every step consumes exactly five uniform doubles from the chain's generator,
in a fixed order: electron selector, three displacement components, accept
threshold.  The fast block kernel consumes the same stream positionally, so
both drivers reproduce identical trajectories from one seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Box, wrap
from .model import HARD_CORE_RADIUS, GasParams, log_f_ratio

TUNE_FLOOR = 1e-4


@dataclass(frozen=True)
class ChainConfig:
    """Knobs of one Markov chain; seeds are 64-bit non-negative integers.

    ``max_displacement`` of None means "start at L/4 and let burn-in tuning
    find a step size"; tuning is frozen once measurement starts.
    """

    seed: int
    n_sweeps_burnin: int = 2000
    n_sweeps_measure: int = 20000
    max_displacement: float | None = None
    target_acceptance: float = 0.5
    tune_interval: int = 50
    block_size: int = 1000

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.n_sweeps_measure < 1:
            raise ValueError("need at least one measurement sweep")
        if self.n_sweeps_burnin < 0:
            raise ValueError("burn-in sweep count cannot be negative")
        if not 0.0 < self.target_acceptance < 1.0:
            raise ValueError("target acceptance must lie in (0, 1)")
        if self.tune_interval < 1:
            raise ValueError("tune interval must be >= 1 sweep")

    def validate_against(self, box: Box):
        if self.max_displacement is not None and not (
            0.0 < self.max_displacement < 0.5 * box.length
        ):
            raise ValueError(
                f"max_displacement must lie in (0, L/2) = (0, {0.5 * box.length}), "
                f"got {self.max_displacement}"
            )


def initial_displacement(config: ChainConfig, box: Box) -> float:
    config.validate_against(box)
    if config.max_displacement is not None:
        return config.max_displacement
    return 0.25 * box.length


@dataclass
class ChainState:
    """Mutable state owned by exactly one chain."""

    positions: np.ndarray
    rng: np.random.Generator
    box: Box
    max_displacement: float
    accepted_moves: int = 0
    attempted_moves: int = 0
    window_accepted: int = 0
    window_attempted: int = 0


def draw_positions(params: GasParams, rng: np.random.Generator) -> np.ndarray:
    """N positions uniform in the box, redrawing any that lands on an earlier one."""
    length = params.box.length
    positions = np.empty((params.n_electrons, 3))
    for i in range(params.n_electrons):
        while True:
            positions[i] = rng.random(3) * length
            if i == 0:
                break
            delta = positions[:i] - positions[i]
            delta -= length * np.floor(delta / length + 0.5)
            if np.min(np.einsum("ij,ij->i", delta, delta)) >= HARD_CORE_RADIUS**2:
                break
    return positions


def init_configuration(params: GasParams, seed: int) -> np.ndarray:
    """Deterministic uniform starting configuration for the given seed."""
    return draw_positions(params, np.random.default_rng(seed))


def start_chain(params: GasParams, config: ChainConfig) -> ChainState:
    rng = np.random.default_rng(config.seed)
    return ChainState(
        positions=draw_positions(params, rng),
        rng=rng,
        box=params.box,
        max_displacement=initial_displacement(config, params.box),
    )


def metropolis_step(state: ChainState, params: GasParams) -> bool:
    """One trial move: uniform electron pick, cube-uniform displacement,
    accept with min(1, weight ratio).  Returns whether the move was accepted."""
    positions = state.positions
    n = positions.shape[0]
    u_idx = state.rng.random()
    k = min(int(u_idx * n), n - 1)
    u = state.rng.random(3)
    new_position = wrap(positions[k] + (2.0 * u - 1.0) * state.max_displacement, state.box)
    u_acc = state.rng.random()

    log_ratio = log_f_ratio(positions, k, new_position, params)
    accepted = log_ratio >= 0.0 or u_acc < math.exp(log_ratio)
    if accepted:
        positions[k] = new_position
        state.accepted_moves += 1
        state.window_accepted += 1
    state.attempted_moves += 1
    state.window_attempted += 1
    return accepted


def run_sweep(state: ChainState, params: GasParams) -> ChainState:
    """N Metropolis steps."""
    for _ in range(params.n_electrons):
        metropolis_step(state, params)
    return state


def tuned_displacement(delta: float, acceptance: float, target: float, box: Box) -> float:
    """Burn-in step-size rule: 10% up when accepting too often, 10% down when
    too rarely, clamped away from zero and the half box."""
    if acceptance > target:
        delta = delta * 1.1
    elif acceptance < target:
        delta = delta * 0.9
    return min(max(delta, TUNE_FLOOR), 0.5 * box.length)


def tune_step_size(state: ChainState, config: ChainConfig) -> float:
    """Apply the tuning rule to the acceptance measured since the last tune.

    Only meaningful during burn-in; callers freeze the step size afterwards.
    """
    if state.window_attempted > 0:
        acceptance = state.window_accepted / state.window_attempted
        state.max_displacement = tuned_displacement(
            state.max_displacement, acceptance, config.target_acceptance, state.box
        )
    state.window_accepted = 0
    state.window_attempted = 0
    return state.max_displacement
