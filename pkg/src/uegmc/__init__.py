"""Monte Carlo construction of local kinetic functionals for the uniform electron gas."""

from .estimator import ChainStats, Estimate, accumulate, finalize, merge_stats
from .geometry import Box, box_length, minimum_image, wrap
from .model import (
    HARD_CORE_RADIUS,
    GasParams,
    SingularityError,
    coulomb_summand,
    fisher_summand,
    log_f_ratio,
    pair_energy,
)
from .runner import ChainResult, derive_seed, run_chain_estimate
from .sampler import ChainConfig, ChainState, init_configuration, metropolis_step, run_sweep

__all__ = [
    "Box",
    "box_length",
    "minimum_image",
    "wrap",
    "GasParams",
    "SingularityError",
    "HARD_CORE_RADIUS",
    "pair_energy",
    "log_f_ratio",
    "fisher_summand",
    "coulomb_summand",
    "ChainConfig",
    "ChainState",
    "init_configuration",
    "metropolis_step",
    "run_sweep",
    "ChainStats",
    "Estimate",
    "accumulate",
    "finalize",
    "merge_stats",
    "ChainResult",
    "derive_seed",
    "run_chain_estimate",
]
