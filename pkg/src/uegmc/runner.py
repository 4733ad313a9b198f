"""Chain driver: burn-in with step-size tuning, then measurement.

Burn-in advances in tune-interval blocks so the step size can adapt; the
measurement phase runs with a frozen step size in fixed-size blocks that
feed the estimator in bulk.  All randomness comes from one numpy generator
per chain, so a (seed, params, config) triple pins the whole trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .estimator import ChainStats, Estimate, extend, finalize
from .model import HARD_CORE_RADIUS, GasParams
from .sampler import ChainConfig, draw_positions, initial_displacement, tuned_displacement

MEASURE_CHUNK_SWEEPS = 200

# stream tags keeping derived seeds for different purposes disjoint
PURPOSE_SCAN = 0
PURPOSE_REFINE = 1
PURPOSE_ESTIMATE = 2
PURPOSE_ORACLE = 3


def derive_seed(base_seed: int, purpose: int, index: int) -> int:
    """Collision-resistant 64-bit chain seed from (base seed, purpose, index)."""
    ss = np.random.SeedSequence((base_seed, purpose, index))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ChainResult:
    estimate: Estimate
    acceptance_rate: float
    final_displacement: float
    seed: int


def run_chain_estimate(params: GasParams, config: ChainConfig) -> ChainResult:
    """Run one full chain (burn-in + measurement) and finalize its estimate."""
    n = params.n_electrons
    length = params.box.length
    rng = np.random.default_rng(config.seed)
    positions = draw_positions(params, rng)
    delta = initial_displacement(config, params.box)
    beta = params.effective_beta

    scratch_f = np.empty(config.tune_interval * n)
    scratch_c = np.empty(config.tune_interval * n)
    remaining = config.n_sweeps_burnin
    while remaining > 0:
        sweeps = min(config.tune_interval, remaining)
        steps = sweeps * n
        randoms = rng.random((steps, 5))
        acc = kernels.run_block(
            positions, length, params.density, params.gamma, beta,
            HARD_CORE_RADIUS, delta, randoms, scratch_f[:steps], scratch_c[:steps],
        )
        delta = tuned_displacement(delta, acc / steps, config.target_acceptance, params.box)
        remaining -= sweeps

    stats = ChainStats(block_size=config.block_size)
    accepted = 0
    attempted = 0
    remaining = config.n_sweeps_measure
    while remaining > 0:
        sweeps = min(MEASURE_CHUNK_SWEEPS, remaining)
        steps = sweeps * n
        randoms = rng.random((steps, 5))
        fisher = np.empty(steps)
        coulomb = np.empty(steps)
        accepted += kernels.run_block(
            positions, length, params.density, params.gamma, beta,
            HARD_CORE_RADIUS, delta, randoms, fisher, coulomb,
        )
        attempted += steps
        extend(stats, fisher, coulomb)
        remaining -= sweeps

    return ChainResult(
        estimate=finalize(stats, params),
        acceptance_rate=accepted / attempted,
        final_displacement=delta,
        seed=config.seed,
    )
