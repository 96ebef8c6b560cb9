"""eps-skyline identification: the level/block algorithm, truncation, and the naive baseline."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .arms import SamplingOracle
from .subroutines import BestArmStrategy, est_mean, find_best, hoeffding_samples, median_elimination
from .verify import exact_skyline


class LevelCapExceeded(RuntimeError):
    """The level loop ran past 2*ceil(log2 n) + 2 levels."""


@dataclass(frozen=True)
class Config:
    epsilon: float
    delta: float

    def __post_init__(self):
        for name in ("epsilon", "delta"):
            x = getattr(self, name)
            if not (0.0 < x < 1.0):
                raise ValueError(f"{name} must lie strictly inside (0, 1), got {x!r}")


@dataclass(frozen=True)
class Block:
    level: int
    ordinal: int
    lo: int
    hi: int  # inclusive

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty block [{self.lo}, {self.hi}]")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def arms(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class RoundRecord:
    block: Block
    delta_level: float
    delta_round: float
    prev: int
    L: float
    k: int
    estimate: float
    contributed: bool
    samples_this_round: int
    U: float | None = None
    target_children: float | None = None
    # arms dropped for good by this round, as an inclusive range (None if nothing dropped)
    dropped: tuple[int, int] | None = None


@dataclass
class LevelRecord:
    level: int
    block_sizes: list[int]
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def block_count(self) -> int:
        return len(self.block_sizes)

    @property
    def active_arms(self) -> int:
        return sum(self.block_sizes)


@dataclass
class RunTrace:
    n_arms: int
    first_estimate: float
    levels: list[LevelRecord] = field(default_factory=list)

    def rounds(self):
        for lvl in self.levels:
            yield from lvl.rounds

    @property
    def levels_used(self) -> int:
        return len(self.levels)


@dataclass
class SkylineResult:
    S: list[int]
    M: dict[int, float]
    trace: RunTrace | None
    samples_total: int
    # pre-truncation output; equals S when truncation was not requested
    full_S: list[int] | None = None


def level_cap(n: int) -> int:
    return 2 * math.ceil(math.log2(n)) + 2 if n > 1 else 2


SPLIT_RULES = ("size", "count")


def split_block(
    block: Block,
    k: int,
    L: float,
    U: float,
    epsilon: float,
    first_ordinal: int = 1,
    rule: str = "count",
) -> list[Block]:
    """Cut [block.lo, k-1] into next-level blocks, with b = (4/eps)(U-L).

    ``rule="count"`` (default) makes exactly floor(b) near-equal children
    when k-lo >= b and singletons otherwise, so there are never more than
    b children. ``rule="size"`` uses blocks of size max(1, floor((k-lo)/b)),
    the last one possibly shorter; that can yield nearly 2b children and
    break the b_{l+1} < (10/3) b_l + 4/eps growth bound.
    """
    if rule not in SPLIT_RULES:
        raise ValueError(f"unknown split rule {rule!r}")
    if not (block.lo <= k <= block.hi):
        raise ValueError(f"k={k} outside block [{block.lo}, {block.hi}]")
    if not U > L:
        raise ValueError(f"upper bound {U} must exceed lower bound {L}")
    width = k - block.lo
    if width == 0:
        return []
    target = (4.0 / epsilon) * (U - L)
    if rule == "count" and width >= target:
        count = max(1, math.floor(target))
        edges = [block.lo + (width * j) // count for j in range(count + 1)]
        return [
            Block(block.level + 1, first_ordinal + j, edges[j], edges[j + 1] - 1)
            for j in range(count)
        ]
    size = max(1, math.floor(width / target))
    children = []
    for j, lo in enumerate(range(block.lo, k, size)):
        children.append(Block(block.level + 1, first_ordinal + j, lo, min(lo + size, k) - 1))
    return children


def truncate_skyline(S: Sequence[int], M: Mapping[int, float], epsilon: float) -> list[int]:
    """Left-to-right pruning: drop s' when M[s] + 3eps/4 > M[s'] for the current anchor s."""
    S = sorted(S)
    missing = [s for s in S if s not in M]
    if missing:
        raise KeyError(f"no estimate for skyline members {missing}")
    if not S:
        return []
    kept = [S[0]]
    for s2 in S[1:]:
        if not M[kept[-1]] + 0.75 * epsilon > M[s2]:
            kept.append(s2)
    return kept


def identify_skyline(
    oracle: SamplingOracle,
    config: Config,
    *,
    truncate: bool = False,
    strategy: BestArmStrategy = median_elimination,
    split_rule: str = "count",
) -> SkylineResult:
    """Run the level/block eps-skyline algorithm on ``oracle``.

    Arm 0 is always kept. Each level processes its blocks in ascending
    order; a block either contributes its FindBest winner k (and its arms
    left of k are re-split for the next level) or is dropped entirely.
    Arms right of a contributed k are dropped.
    """
    if split_rule not in SPLIT_RULES:
        raise ValueError(f"unknown split rule {split_rule!r}")
    eps, delta = config.epsilon, config.delta
    n = oracle.n
    start = oracle.pulls_total
    tiny = eps / 12.0

    first = est_mean(oracle, 0, tiny, delta / 2.0)
    S = [0]
    M = {0: first.estimate}
    trace = RunTrace(n, first.estimate)
    blocks = [Block(1, 1, 1, n - 1)] if n > 1 else []
    cap = level_cap(n)

    level = 1
    while blocks:
        if level > cap:
            raise LevelCapExceeded(f"level {level} exceeds cap {cap} for n={n}")
        b_level = len(blocks)
        delta_level = delta / 2.0 ** (level + 1)
        delta_round = delta_level / b_level
        record = LevelRecord(level, [blk.size for blk in blocks])
        upcoming: list[Block] = []

        for blk in blocks:
            before = oracle.pulls_total
            prev = S[bisect.bisect_left(S, blk.lo) - 1]
            L = eps / 2.0 + M[prev]
            k = find_best(oracle, blk.arms, tiny, delta_round / 2.0, strategy)
            mu_k = est_mean(oracle, k, tiny, delta_round / 2.0).estimate

            if L + eps / 4.0 > mu_k:
                record.rounds.append(
                    RoundRecord(blk, delta_level, delta_round, prev, L, k, mu_k, False,
                                oracle.pulls_total - before, dropped=(blk.lo, blk.hi))
                )
                continue

            bisect.insort(S, k)
            M[k] = mu_k
            U = mu_k + eps / 6.0
            target = (4.0 / eps) * (U - L)
            upcoming.extend(
                split_block(blk, k, L, U, eps, len(upcoming) + 1, split_rule)
            )
            record.rounds.append(
                RoundRecord(blk, delta_level, delta_round, prev, L, k, mu_k, True,
                            oracle.pulls_total - before, U, target,
                            (k + 1, blk.hi) if k < blk.hi else None)
            )

        trace.levels.append(record)
        blocks = upcoming
        level += 1

    full = list(S)
    if truncate:
        S = truncate_skyline(S, M, eps)
    return SkylineResult(S, M, trace, oracle.pulls_total - start, full)


def naive_skyline(oracle: SamplingOracle, config: Config) -> SkylineResult:
    """Estimate every arm to +-eps/2 at confidence delta/n and take the exact skyline."""
    n = oracle.n
    start = oracle.pulls_total
    k = hoeffding_samples(config.epsilon / 2.0, config.delta / n)
    estimates = [min(1.0, max(0.0, float(x))) for x in oracle.sample_means(range(n), k)]
    S = exact_skyline(estimates)
    M = {i: estimates[i] for i in range(n)}
    return SkylineResult(S, M, None, oracle.pulls_total - start, list(S))
