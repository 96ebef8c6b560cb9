"""Ground-truth checkers that use the true arm means."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class Violation:
    condition: int  # 1 or 2
    s: int
    t: int
    margin: float


@dataclass
class ViolationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def _check_members(n: int, S: Sequence[int]) -> list[int]:
    members = sorted(set(int(s) for s in S))
    if not members:
        raise ValueError("skyline must be non-empty")
    if members[0] != 0:
        raise ValueError("skyline must contain arm 0")
    if members[-1] >= n:
        raise ValueError(f"skyline index {members[-1]} out of range for {n} arms")
    return members


def is_eps_skyline(means: Sequence[float], S: Sequence[int], epsilon: float) -> ViolationReport:
    """Check both eps-skyline conditions and list every violated (s, t) pair.

    Condition 1: an excluded arm t has its nearest member s < t of S with
    mu[s] >= mu[t] - eps. Condition 2: every member s has mu[s] >= mu[t] - eps
    for all t <= s.
    """
    mu = np.asarray(means, dtype=float)
    members = _check_members(mu.size, S)
    report = ViolationReport()

    pred = np.zeros(mu.size, dtype=np.int64)
    in_s = np.zeros(mu.size, dtype=bool)
    in_s[members] = True
    last = 0
    for t in range(mu.size):
        if in_s[t]:
            last = t
        pred[t] = last
    for t in np.flatnonzero(~in_s):
        s = int(pred[t])
        if not mu[s] >= mu[t] - epsilon:
            report.violations.append(Violation(1, s, int(t), float(mu[t] - epsilon - mu[s])))

    for s in members:
        bad = np.flatnonzero(~(mu[s] >= mu[: s + 1] - epsilon))
        for t in bad:
            report.violations.append(Violation(2, s, int(t), float(mu[t] - epsilon - mu[s])))
    return report


def exact_skyline(means: Sequence[float]) -> list[int]:
    """Indices whose mean is at least every earlier mean (ties survive)."""
    mu = np.asarray(means, dtype=float)
    if mu.size == 0:
        raise ValueError("need at least one mean")
    return np.flatnonzero(mu >= np.maximum.accumulate(mu)).tolist()


def is_eps_best(means: Sequence[float], block: Sequence[int], i: int, epsilon: float) -> bool:
    block = list(block)
    if i not in block:
        raise ValueError(f"arm {i} is not in the block")
    return all(means[i] >= means[j] - epsilon for j in block)


@dataclass(frozen=True)
class RoundCheck:
    level: int
    ordinal: int
    best_mean: float
    ident_ok: bool
    msmnt_ok: bool


@dataclass(frozen=True)
class EventCheck:
    first_arm_ok: bool
    rounds: tuple[RoundCheck, ...]

    @property
    def overall(self) -> bool:
        return self.first_arm_ok and all(r.ident_ok and r.msmnt_ok for r in self.rounds)

    def __bool__(self) -> bool:
        return self.overall


def check_event_E(trace, means: Sequence[float], epsilon: float) -> EventCheck:
    """Did every FindBest/EstMean call in ``trace`` land within eps/12?"""
    mu = np.asarray(means, dtype=float)
    if trace.n_arms != mu.size:
        raise ValueError(f"trace covers {trace.n_arms} arms but {mu.size} means were given")
    tol = epsilon / 12.0
    first_ok = bool(abs(mu[0] - trace.first_estimate) < tol)
    checks = []
    for rec in trace.rounds():
        blk = rec.block
        best = float(mu[blk.lo : blk.hi + 1].max())
        checks.append(
            RoundCheck(
                blk.level,
                blk.ordinal,
                best,
                bool(best - mu[rec.k] < tol),
                bool(abs(mu[rec.k] - rec.estimate) < tol),
            )
        )
    return EventCheck(first_ok, tuple(checks))


def block_growth_violations(trace, epsilon: float) -> list[tuple[int, int, int]]:
    """Levels where b_{l+1} >= (10/3) b_l + 4/eps, as (level, b_l, b_{l+1})."""
    counts = [lvl.block_count for lvl in trace.levels] + [0]
    return [
        (lvl, counts[lvl - 1], counts[lvl])
        for lvl in range(1, len(counts))
        if not counts[lvl] < (10.0 / 3.0) * counts[lvl - 1] + 4.0 / epsilon
    ]


def active_decay_violations(trace) -> list[tuple[int, int, int]]:
    """Levels l > 2 with n_l > n_{l-2} / 2, as (level, n_{l-2}, n_l)."""
    active = [lvl.active_arms for lvl in trace.levels]
    return [
        (l + 1, active[l - 2], active[l])
        for l in range(2, len(active))
        if not active[l] <= active[l - 2] / 2.0
    ]


def truncation_bound(epsilon: float) -> int:
    return math.ceil(12.0 / (7.0 * epsilon)) + 1


def truncation_violations(
    S: Sequence[int], M: Mapping[int, float], epsilon: float
) -> list[str]:
    """Size and 3eps/4 spacing checks on a truncated skyline."""
    problems = []
    if len(S) > truncation_bound(epsilon):
        problems.append(f"size {len(S)} exceeds {truncation_bound(epsilon)}")
    for s, s2 in zip(S, S[1:]):
        if M[s] + 0.75 * epsilon > M[s2]:
            problems.append(f"spacing {M[s2] - M[s]:.6g} between {s} and {s2} below 3eps/4")
    return problems
