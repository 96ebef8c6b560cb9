"""Trial runner and parameter sweeps with CSV output."""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Sequence

from scipy.stats import binomtest

from .arms import Instance, SamplingOracle, load_instance
from .instances import gen_staircase, gen_uniform_random
from .skyline import Config, LevelCapExceeded, SkylineResult, identify_skyline, naive_skyline
from .verify import check_event_E, is_eps_skyline

log = logging.getLogger(__name__)

ALGOS = ("alg1", "alg1+truncate", "naive")
CSV_COLUMNS = (
    "trial_id", "algo", "n", "epsilon", "delta", "seed", "samples_total",
    "skyline_size", "valid", "event_E", "levels_used", "wall_ms",
)


@dataclass
class TrialRecord:
    trial_id: int
    algo: str
    n: int
    epsilon: float
    delta: float
    seed: int
    samples_total: int
    skyline_size: int
    valid: bool
    event_E: bool | None
    levels_used: int
    wall_ms: float
    # not written to CSV
    result: SkylineResult | None = field(default=None, repr=False, compare=False)
    diagnostic: str = field(default="", compare=False)

    def row(self) -> dict[str, Any]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "true" if v else "false"
            return v

        return {c: fmt(getattr(self, c)) for c in CSV_COLUMNS}


def derive_seed(base_seed: int, *keys: Any) -> int:
    """base_seed XOR a stable 63-bit hash of ``keys``."""
    digest = hashlib.blake2b(repr(keys).encode(), digest_size=8).digest()
    return (int(base_seed) ^ int.from_bytes(digest, "little")) & ((1 << 63) - 1)


def run_trial(
    instance: Instance,
    config: Config,
    algo: str,
    seed: int,
    trial_id: int = 0,
    keep_result: bool = False,
) -> TrialRecord:
    """Run one algorithm on a fresh oracle and score it against the true means."""
    if algo not in ALGOS:
        raise ValueError(f"unknown algo {algo!r}; expected one of {ALGOS}")
    oracle = SamplingOracle(instance, seed)
    means = instance.means
    t0 = time.perf_counter()
    try:
        if algo == "naive":
            res = naive_skyline(oracle, config)
        else:
            res = identify_skyline(oracle, config, truncate=algo == "alg1+truncate")
    except LevelCapExceeded as exc:
        log.warning("trial %d (%s, seed %d) failed: %s", trial_id, algo, seed, exc)
        return TrialRecord(
            trial_id, algo, instance.n, config.epsilon, config.delta, seed,
            oracle.pulls_total, 0, False, None, 0,
            round((time.perf_counter() - t0) * 1000.0, 3), diagnostic=str(exc),
        )
    wall = round((time.perf_counter() - t0) * 1000.0, 3)
    assert oracle.pulls_total == int(oracle.pulls_per_arm.sum())

    valid = is_eps_skyline(means, res.S, config.epsilon).valid
    event = None
    if res.trace is not None:
        event = check_event_E(res.trace, means, config.epsilon).overall
    return TrialRecord(
        trial_id, algo, instance.n, config.epsilon, config.delta, seed,
        res.samples_total, len(res.S), valid, event,
        res.trace.levels_used if res.trace is not None else 0, wall,
        result=res if keep_result else None,
    )


@dataclass
class SweepConfig:
    """Grid of cells (algo x n x epsilon x delta), each run ``trials`` times.

    ``generator`` is {"kind": "uniform"}, {"kind": "staircase", "m": M}
    or {"kind": "file", "path": P}. Only the uniform generator uses the
    ``n`` grid; the others take n from the instance.
    """

    generator: dict
    epsilon: list[float]
    delta: list[float]
    n: list[int] = field(default_factory=lambda: [0])
    trials: int = 1
    base_seed: int = 0
    algos: list[str] = field(default_factory=lambda: ["alg1+truncate"])
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        kind = self.generator.get("kind")
        if kind not in ("uniform", "staircase", "file"):
            raise ValueError(f"unknown generator kind {kind!r}")
        if kind == "uniform" and any(int(n) < 1 for n in self.n):
            raise ValueError("uniform generator needs every n >= 1")
        if kind == "staircase" and int(self.generator.get("m", 0)) < 1:
            raise ValueError("staircase generator needs m >= 1")
        if kind == "file" and "path" not in self.generator:
            raise ValueError("file generator needs a path")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for eps, dl in itertools.product(self.epsilon, self.delta):
            Config(eps, dl)
        for a in self.algos:
            if a not in ALGOS:
                raise ValueError(f"unknown algo {a!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown sweep config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> "SweepConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def cells(self):
        ns = self.n if self.generator["kind"] == "uniform" else [0]
        for n, eps, dl in itertools.product(ns, self.epsilon, self.delta):
            for algo in self.algos:
                yield algo, int(n), float(eps), float(dl)


def _make_instance(generator: dict, n: int, eps: float, seed: int) -> Instance:
    kind = generator["kind"]
    if kind == "uniform":
        return gen_uniform_random(n, seed)
    if kind == "staircase":
        return gen_staircase(eps, int(generator["m"]), seed).instance
    return load_instance(generator["path"])


def _sweep_job(job):
    generator, algo, n, eps, dl, trial_id, base_seed = job
    # seeds ignore the algo so every algorithm sees the same instances
    seed = derive_seed(base_seed, n, eps, dl, trial_id)
    instance = _make_instance(generator, n, eps, derive_seed(seed, "instance"))
    return run_trial(instance, Config(eps, dl), algo, seed, trial_id)


def sweep(config: SweepConfig, output: str | Path | None = None) -> list[TrialRecord]:
    """Run every (cell, trial) pair; write the CSV (and a summary CSV) if an output path is set.

    Raises:
        OSError: the output path cannot be written; checked before any trial runs.
    """
    out = output if output is not None else config.output
    handle = open(out, "w", newline="") if out else None
    jobs = [
        (config.generator, algo, n, eps, dl, t, config.base_seed)
        for algo, n, eps, dl in config.cells()
        for t in range(config.trials)
    ]
    try:
        if config.workers > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                records = list(pool.map(_sweep_job, jobs, chunksize=4))
        else:
            records = [_sweep_job(j) for j in jobs]
        if handle:
            write_csv(records, handle)
    finally:
        if handle:
            handle.close()
    if out:
        write_summary(summarize(records), summary_path_for(out))
    return records


def write_csv(records: Sequence[TrialRecord], handle) -> None:
    writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row())


def wilson_interval(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


def summarize(records: Sequence[TrialRecord]) -> list[dict[str, Any]]:
    """Per-cell median samples and success rate with a Wilson 95% interval."""
    cells: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.algo, r.n, r.epsilon, r.delta), []).append(r)
    rows = []
    for (algo, n, eps, dl), recs in cells.items():
        ok = sum(r.valid for r in recs)
        lo, hi = wilson_interval(ok, len(recs))
        rows.append({
            "algo": algo, "n": n, "epsilon": eps, "delta": dl, "trials": len(recs),
            "median_samples": statistics.median(r.samples_total for r in recs),
            "success_rate": ok / len(recs), "wilson_low": lo, "wilson_high": hi,
        })
    return rows


def summary_path_for(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".summary.csv")


def write_summary(rows: Sequence[dict], path: str | Path) -> None:
    if not rows:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def record_to_json(record: TrialRecord, skyline: Sequence[int] | None = None) -> str:
    d = {c: getattr(record, c) for c in CSV_COLUMNS}
    if skyline is not None:
        d["skyline"] = list(skyline)
    if record.diagnostic:
        d["diagnostic"] = record.diagnostic
    return json.dumps(d)
