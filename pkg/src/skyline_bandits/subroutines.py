"""Sampling primitives: Hoeffding mean estimation and PAC best-arm search.

``find_best`` defaults to median elimination with the classical schedule
(first round accuracy eps/4 and confidence delta/2, then eps *= 3/4 and
delta /= 2 per round). Its pull count is seed-independent and satisfies

    pulls <= FIND_BEST_CONSTANT * |block| / eps**2 * ln(1/delta)

for delta <= 1/2 (checked in the test suite over block sizes 10..1000).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .arms import SamplingOracle

FIND_BEST_CONSTANT = 8000.0


def _check_unit(name: str, x: float) -> None:
    if not (0.0 < x < 1.0):
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {x!r}")


def hoeffding_samples(epsilon: float, delta: float) -> int:
    """Pulls needed for a two-sided Hoeffding bound: ceil(ln(2/delta) / (2 eps^2))."""
    _check_unit("epsilon", epsilon)
    _check_unit("delta", delta)
    return math.ceil(math.log(2.0 / delta) / (2.0 * epsilon * epsilon))


@dataclass(frozen=True)
class EstimateRecord:
    arm: int
    estimate: float
    samples_used: int
    epsilon: float
    delta: float


def est_mean(oracle: SamplingOracle, i: int, epsilon: float, delta: float) -> EstimateRecord:
    k = hoeffding_samples(epsilon, delta)
    mu_hat = float(oracle.sample_means([i], k)[0])
    return EstimateRecord(i, min(1.0, max(0.0, mu_hat)), k, epsilon, delta)


def _top_half(arms: np.ndarray, means: np.ndarray) -> np.ndarray:
    keep = (arms.size + 1) // 2
    # descending mean, ascending index on ties
    order = np.lexsort((arms, -means))
    return np.sort(arms[order[:keep]])


def median_elimination(
    oracle: SamplingOracle, arms: Sequence[int], epsilon: float, delta: float
) -> int:
    survivors = np.asarray(arms, dtype=np.int64)
    eps_r, delta_r = epsilon / 4.0, delta / 2.0
    while survivors.size > 1:
        k = math.ceil(4.0 / (eps_r * eps_r) * math.log(3.0 / delta_r))
        means = oracle.sample_means(survivors, k)
        survivors = _top_half(survivors, means)
        eps_r *= 0.75
        delta_r /= 2.0
    return int(survivors[0])


def uniform_best(oracle: SamplingOracle, arms: Sequence[int], epsilon: float, delta: float) -> int:
    """Estimate every arm to +-eps/2 at confidence delta/|arms|; return the argmax.

    Cheaper than median elimination for very small blocks.
    """
    idx = np.asarray(arms, dtype=np.int64)
    if idx.size == 1:
        return int(idx[0])
    k = hoeffding_samples(epsilon / 2.0, delta / idx.size)
    means = oracle.sample_means(idx, k)
    return int(idx[int(np.argmax(means))])


BestArmStrategy = Callable[[SamplingOracle, Sequence[int], float, float], int]


def find_best(
    oracle: SamplingOracle,
    block: Sequence[int],
    epsilon: float,
    delta: float,
    strategy: BestArmStrategy = median_elimination,
) -> int:
    """Return an arm of ``block`` that is eps-best with probability >= 1 - delta."""
    if len(block) == 0:
        raise ValueError("find_best needs a non-empty block")
    _check_unit("epsilon", epsilon)
    _check_unit("delta", delta)
    if len(block) == 1:
        return int(block[0])
    return strategy(oracle, block, epsilon, delta)
