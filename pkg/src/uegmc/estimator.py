"""Accumulation of the per-step Fisher/Coulomb summands with block-averaged errors.

One sample is taken per Metropolis step; rejected moves re-enter the old
configuration's summands, so the sample count equals the step count.  Means
come from running sums (independent of blocking); error bars are standard
errors of means over consecutive fixed-size blocks, dropping the final
partial block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import GasParams

DEFAULT_BLOCK_SIZE = 1000


class InsufficientDataError(RuntimeError):
    """Fewer than two complete blocks: no variance estimate is possible."""


@dataclass
class ChainStats:
    """Accumulators for the Fisher and Coulomb estimators along one chain."""

    block_size: int = DEFAULT_BLOCK_SIZE
    m_samples: int = 0
    sum_fisher: float = 0.0
    sum_coulomb: float = 0.0
    block_means: list[tuple[float, float]] = field(default_factory=list)
    _partial_fisher: list[float] = field(default_factory=list, repr=False)
    _partial_coulomb: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError(f"block_size must be >= 1, got {self.block_size}")


def accumulate(stats: ChainStats, fisher: float, coulomb: float) -> ChainStats:
    """Add one per-step sample; raises on non-finite input (guard failure upstream)."""
    if not (math.isfinite(fisher) and math.isfinite(coulomb)):
        raise ValueError(f"non-finite summand (fisher={fisher}, coulomb={coulomb})")
    stats.sum_fisher += fisher
    stats.sum_coulomb += coulomb
    stats.m_samples += 1
    stats._partial_fisher.append(fisher)
    stats._partial_coulomb.append(coulomb)
    if len(stats._partial_fisher) == stats.block_size:
        _close_block(stats, np.array(stats._partial_fisher), np.array(stats._partial_coulomb))
        stats._partial_fisher.clear()
        stats._partial_coulomb.clear()
    return stats


def extend(stats: ChainStats, fisher: np.ndarray, coulomb: np.ndarray) -> ChainStats:
    """Bulk form of :func:`accumulate` for whole arrays of per-step samples.

    The running totals are accumulated one array-sum per call, so the
    reported means never depend on the block size.
    """
    fisher = np.asarray(fisher, dtype=np.float64)
    coulomb = np.asarray(coulomb, dtype=np.float64)
    if fisher.shape != coulomb.shape or fisher.ndim != 1:
        raise ValueError("fisher and coulomb sample arrays must be 1-D and equal length")
    if not (np.all(np.isfinite(fisher)) and np.all(np.isfinite(coulomb))):
        raise ValueError("non-finite summand in sample block")
    stats.sum_fisher += float(np.sum(fisher))
    stats.sum_coulomb += float(np.sum(coulomb))
    stats.m_samples += fisher.size

    if stats._partial_fisher:
        fisher = np.concatenate([stats._partial_fisher, fisher])
        coulomb = np.concatenate([stats._partial_coulomb, coulomb])
    n_blocks = fisher.size // stats.block_size
    cut = n_blocks * stats.block_size
    for b in range(n_blocks):
        sl = slice(b * stats.block_size, (b + 1) * stats.block_size)
        _close_block(stats, fisher[sl], coulomb[sl])
    stats._partial_fisher = list(fisher[cut:])
    stats._partial_coulomb = list(coulomb[cut:])
    return stats


def _close_block(stats: ChainStats, fisher: np.ndarray, coulomb: np.ndarray):
    stats.block_means.append((float(np.mean(fisher)), float(np.mean(coulomb))))


@dataclass(frozen=True)
class Estimate:
    """Finalized chain estimate: I, C, Gamma = N*(I + C), with 1-sigma errors."""

    i_hat: float
    c_hat: float
    i_err: float
    c_err: float
    gamma_hat: float
    gamma_err: float
    m_samples: int
    n_blocks: int


def finalize(stats: ChainStats, params: GasParams) -> Estimate:
    """Means from the running sums; errors from the spread of block means.

    The Gamma error uses per-block (fisher + coulomb) means directly, so the
    within-chain correlation of the two terms is accounted for.
    """
    n_blocks = len(stats.block_means)
    if n_blocks < 2:
        raise InsufficientDataError(
            f"need >= 2 complete blocks of {stats.block_size}, have {n_blocks} "
            f"({stats.m_samples} samples)"
        )
    i_hat = stats.sum_fisher / stats.m_samples
    c_hat = stats.sum_coulomb / stats.m_samples
    blocks = np.asarray(stats.block_means)
    i_err = float(np.std(blocks[:, 0], ddof=1)) / math.sqrt(n_blocks)
    c_err = float(np.std(blocks[:, 1], ddof=1)) / math.sqrt(n_blocks)
    total_err = float(np.std(blocks[:, 0] + blocks[:, 1], ddof=1)) / math.sqrt(n_blocks)
    n = params.n_electrons
    return Estimate(
        i_hat=i_hat,
        c_hat=c_hat,
        i_err=i_err,
        c_err=c_err,
        gamma_hat=n * (i_hat + c_hat),
        gamma_err=n * total_err,
        m_samples=stats.m_samples,
        n_blocks=n_blocks,
    )


def merge_stats(parts: list[ChainStats]) -> ChainStats:
    """Combine chains run at identical parameters but different seeds.

    Running sums add; block-mean lists concatenate; partial blocks are
    discarded (they never enter error bars anyway).
    """
    if not parts:
        raise ValueError("nothing to merge")
    sizes = {p.block_size for p in parts}
    if len(sizes) > 1:
        raise ValueError(f"cannot merge stats with differing block sizes {sizes}")
    merged = ChainStats(block_size=parts[0].block_size)
    for p in parts:
        merged.sum_fisher += p.sum_fisher
        merged.sum_coulomb += p.sum_coulomb
        merged.m_samples += p.m_samples
        merged.block_means.extend(p.block_means)
    return merged


ESTIMATE_FIELDS = ("n_electrons", "rho", "gamma", "i_hat", "i_err", "c_hat", "c_err",
                   "gamma_hat", "gamma_err", "m_samples", "seed")


def estimate_record(estimate: Estimate, params: GasParams, seed: int) -> dict:
    """Flat record of one estimate for CSV/JSON serialization."""
    return {
        "n_electrons": params.n_electrons,
        "rho": params.density,
        "gamma": params.gamma,
        "i_hat": estimate.i_hat,
        "i_err": estimate.i_err,
        "c_hat": estimate.c_hat,
        "c_err": estimate.c_err,
        "gamma_hat": estimate.gamma_hat,
        "gamma_err": estimate.gamma_err,
        "m_samples": estimate.m_samples,
        "seed": seed,
    }
