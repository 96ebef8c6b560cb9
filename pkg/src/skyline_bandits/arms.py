"""Arm reward laws, problem instances and the metered sampling oracle.

Algorithms never see true means; every observation goes through a
:class:`SamplingOracle`, which owns the RNG and counts each pull.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

BERNOULLI = "bernoulli"
DETERMINISTIC = "deterministic"
DISCRETE = "truncated-discrete"
KINDS = (BERNOULLI, DETERMINISTIC, DISCRETE)


class InvalidArmError(ValueError):
    """Raised when an arm spec has out-of-range parameters."""


@dataclass(frozen=True)
class ArmSpec:
    """Reward law of a single arm, supported on [0, 1].

    ``value`` holds ``p`` for Bernoulli arms and ``v`` for deterministic
    arms. Discrete arms use ``support`` and ``probs`` instead.
    """

    kind: str
    value: float = 0.0
    support: tuple[float, ...] = ()
    probs: tuple[float, ...] = ()

    @classmethod
    def bernoulli(cls, p: float) -> "ArmSpec":
        return cls(BERNOULLI, float(p))

    @classmethod
    def deterministic(cls, v: float) -> "ArmSpec":
        return cls(DETERMINISTIC, float(v))

    @classmethod
    def discrete(cls, support: Iterable[float], probs: Iterable[float]) -> "ArmSpec":
        return cls(DISCRETE, 0.0, tuple(float(x) for x in support), tuple(float(q) for q in probs))

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidArmError(f"unknown arm kind {self.kind!r}")
        if self.kind in (BERNOULLI, DETERMINISTIC):
            if not (0.0 <= self.value <= 1.0) or math.isnan(self.value):
                name = "p" if self.kind == BERNOULLI else "v"
                raise InvalidArmError(f"{self.kind} {name}={self.value} outside [0, 1]")
            return
        if not self.support or len(self.support) != len(self.probs):
            raise InvalidArmError("discrete arm needs equal-length, non-empty support and probs")
        if any(not (0.0 <= x <= 1.0) for x in self.support):
            raise InvalidArmError("discrete support values must lie in [0, 1]")
        if any(not (0.0 <= q <= 1.0) for q in self.probs):
            raise InvalidArmError("discrete probabilities must lie in [0, 1]")
        if abs(math.fsum(self.probs) - 1.0) > 1e-12:
            raise InvalidArmError(f"discrete probabilities sum to {math.fsum(self.probs)!r}, not 1")

    @property
    def mean(self) -> float:
        if self.kind == DISCRETE:
            return math.fsum(x * q for x, q in zip(self.support, self.probs))
        return self.value

    def to_dict(self) -> dict:
        if self.kind == BERNOULLI:
            return {"kind": BERNOULLI, "p": self.value}
        if self.kind == DETERMINISTIC:
            return {"kind": DETERMINISTIC, "v": self.value}
        return {"kind": DISCRETE, "support": list(self.support), "probs": list(self.probs)}

    @classmethod
    def from_dict(cls, d: dict) -> "ArmSpec":
        kind = d.get("kind")
        if kind == BERNOULLI:
            return cls.bernoulli(d["p"])
        if kind == DETERMINISTIC:
            return cls.deterministic(d["v"])
        if kind == DISCRETE:
            return cls.discrete(d["support"], d["probs"])
        raise InvalidArmError(f"unknown arm kind {kind!r}")


@dataclass(frozen=True)
class Instance:
    """Ordered list of arms; ``means`` are derived, never stored separately."""

    arms: tuple[ArmSpec, ...]

    @property
    def n(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> tuple[float, ...]:
        return tuple(a.mean for a in self.arms)

    def __len__(self) -> int:
        return len(self.arms)

    def to_json(self) -> str:
        return json.dumps({"arms": [a.to_dict() for a in self.arms]})

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")


def make_instance(specs: Sequence[ArmSpec]) -> Instance:
    """Validate ``specs`` and wrap them in an :class:`Instance`.

    Raises:
        InvalidArmError: if ``specs`` is empty or any spec is invalid; the
            message names the offending index.
    """
    specs = tuple(specs)
    if not specs:
        raise InvalidArmError("an instance needs at least one arm")
    for i, spec in enumerate(specs):
        try:
            spec.validate()
        except InvalidArmError as exc:
            raise InvalidArmError(f"arm {i}: {exc}") from None
    return Instance(specs)


def instance_from_dict(d: dict) -> Instance:
    try:
        raw = d["arms"]
    except (KeyError, TypeError):
        raise InvalidArmError("instance JSON must be an object with an 'arms' list") from None
    specs = []
    for i, item in enumerate(raw):
        try:
            specs.append(ArmSpec.from_dict(item))
        except (KeyError, TypeError, InvalidArmError) as exc:
            raise InvalidArmError(f"arm {i}: malformed spec ({exc})") from None
    return make_instance(specs)


def load_instance(path: str | Path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def bernoulli_instance(means: Iterable[float]) -> Instance:
    return make_instance([ArmSpec.bernoulli(p) for p in means])


def deterministic_instance(values: Iterable[float]) -> Instance:
    return make_instance([ArmSpec.deterministic(v) for v in values])


class SamplingOracle:
    """Seeded, metered access to the arms of an instance.

    Single-owner: one oracle per trial. ``sample_means`` draws ``k`` pulls
    per arm in one call (a binomial draw for Bernoulli arms), which has the
    same law as ``k`` separate calls to :meth:`pull` and is metered as ``k``
    pulls.
    """

    def __init__(self, instance: Instance, seed: int | None = None):
        self.instance = instance
        self.rng = np.random.default_rng(seed)
        self.pulls_per_arm = np.zeros(instance.n, dtype=np.int64)
        self.pulls_total = 0
        arms = instance.arms
        self._kind = [a.kind for a in arms]
        self._value = np.array([a.value for a in arms], dtype=float)

    @property
    def n(self) -> int:
        return self.instance.n

    def _check(self, i: int) -> None:
        if not (0 <= i < self.instance.n):
            raise IndexError(f"arm index {i} out of range for {self.instance.n} arms")

    def pull(self, i: int) -> float:
        self._check(i)
        arm = self.instance.arms[i]
        if arm.kind == BERNOULLI:
            reward = 1.0 if self.rng.random() < arm.value else 0.0
        elif arm.kind == DETERMINISTIC:
            reward = arm.value
        else:
            j = self.rng.choice(len(arm.support), p=arm.probs)
            reward = arm.support[j]
        self.pulls_per_arm[i] += 1
        self.pulls_total += 1
        return reward

    def sample_means(self, arms: Sequence[int], k: int) -> np.ndarray:
        """Pull each arm in ``arms`` ``k`` times; return the empirical means.

        Deterministic arms return their value exactly.
        """
        idx = np.asarray(arms, dtype=np.int64)
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if idx.size and (idx.min() < 0 or idx.max() >= self.instance.n):
            bad = idx[(idx < 0) | (idx >= self.instance.n)][0]
            raise IndexError(f"arm index {bad} out of range for {self.instance.n} arms")
        out = np.empty(idx.size, dtype=float)
        kinds = [self._kind[i] for i in idx]
        bern = np.array([kd == BERNOULLI for kd in kinds], dtype=bool)
        if bern.any():
            out[bern] = self.rng.binomial(k, self._value[idx[bern]]) / k
        for pos, i in enumerate(idx):
            kind = kinds[pos]
            if kind == DETERMINISTIC:
                out[pos] = self._value[i]
            elif kind == DISCRETE:
                arm = self.instance.arms[i]
                counts = self.rng.multinomial(k, arm.probs)
                out[pos] = float(np.dot(counts, arm.support)) / k
        np.add.at(self.pulls_per_arm, idx, k)
        self.pulls_total += int(k) * int(idx.size)
        return out


def total_samples(oracle: SamplingOracle) -> int:
    return oracle.pulls_total
