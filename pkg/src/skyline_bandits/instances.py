"""Instance generators: uniform random workloads and staircase hard instances."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .arms import ArmSpec, Instance, bernoulli_instance, make_instance


def gen_uniform_random(n: int, seed: int | None) -> Instance:
    """n Bernoulli arms with means drawn i.i.d. uniform on [0, 1]."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return bernoulli_instance(rng.random(n).tolist())


@dataclass(frozen=True)
class StaircaseInstance:
    """T groups of m Bernoulli arms; group t has base mean p_t and one planted arm at p_t + 2eps.

    ``planted`` holds 1-based positions within each group. ``instance``
    prepends a deterministic arm with mean 0 so that the staircase arms
    occupy indices 1..T*m.
    """

    epsilon: float
    T: int
    m: int
    p_levels: tuple[float, ...]
    planted: tuple[int, ...]
    instance: Instance

    @property
    def n(self) -> int:
        return self.T * self.m

    def planted_indices(self) -> list[int]:
        return [t * self.m + c for t, c in enumerate(self.planted)]

    def sidecar(self) -> dict:
        return {"T": self.T, "m": self.m, "planted": list(self.planted), "epsilon": self.epsilon}

    def save(self, path: str | Path, sidecar_path: str | Path | None = None) -> Path:
        path = Path(path)
        self.instance.save(path)
        sidecar_path = Path(sidecar_path) if sidecar_path else sidecar_path_for(path)
        sidecar_path.write_text(json.dumps(self.sidecar()) + "\n")
        return sidecar_path


def sidecar_path_for(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".staircase.json")


def gen_staircase(
    epsilon: float,
    m: int,
    seed: int | None,
    *,
    T: int | None = None,
    base: float = 0.25,
) -> StaircaseInstance:
    """Build a staircase instance with T = floor(1/(4eps)) + 1 groups by default.

    Passing ``T=1`` and a ``base`` gives the single-group planted-arm game.
    """
    if T is None:
        if not (0.0 < epsilon <= 0.125):
            raise ValueError(f"staircase needs 0 < epsilon <= 1/8, got {epsilon!r}")
        T = math.floor(1.0 / (4.0 * epsilon)) + 1
    if m < 1 or T < 1:
        raise ValueError("staircase needs m >= 1 and T >= 1")
    if not (0.0 < epsilon < 1.0) or base < 0.0:
        raise ValueError("staircase needs 0 < epsilon < 1 and base >= 0")
    p = tuple(base + 2.0 * epsilon * t for t in range(T))
    if p[-1] + 2.0 * epsilon > 1.0:
        raise ValueError(f"planted mean {p[-1] + 2.0 * epsilon!r} exceeds 1")

    rng = np.random.default_rng(seed)
    planted = tuple(int(c) for c in rng.integers(1, m + 1, size=T))
    specs = [ArmSpec.deterministic(0.0)]
    for t in range(T):
        for i in range(1, m + 1):
            specs.append(ArmSpec.bernoulli(p[t] + 2.0 * epsilon if i == planted[t] else p[t]))
    return StaircaseInstance(epsilon, T, m, p, planted, make_instance(specs))


def decode_guesses(S: Sequence[int], T: int, m: int) -> tuple[int | None, ...]:
    """For each group, the 1-based position of the largest skyline member in it.

    Groups occupy instance indices (t-1)*m+1 .. t*m (arm 0 is the
    prepended sentinel). A group with no member decodes to None.
    """
    members = sorted(S)
    guesses = []
    for t in range(T):
        lo, hi = t * m + 1, (t + 1) * m
        inside = [s for s in members if lo <= s <= hi]
        guesses.append(inside[-1] - lo + 1 if inside else None)
    return tuple(guesses)
