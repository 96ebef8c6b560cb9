import csv
import io

import pytest

from skyline_bandits.arms import bernoulli_instance
from skyline_bandits.harness import (
    CSV_COLUMNS,
    SweepConfig,
    derive_seed,
    run_trial,
    summarize,
    sweep,
    wilson_interval,
    write_csv,
)
from skyline_bandits.instances import gen_uniform_random
from skyline_bandits.skyline import Config


def strip_wall(records):
    return [{k: v for k, v in r.row().items() if k != "wall_ms"} for r in records]


def test_run_trial_deterministic():
    inst = gen_uniform_random(60, 1)
    a = run_trial(inst, Config(0.2, 0.1), "alg1+truncate", 5)
    b = run_trial(inst, Config(0.2, 0.1), "alg1+truncate", 5)
    assert strip_wall([a]) == strip_wall([b])
    assert a.event_E is not None and a.levels_used >= 1


def test_run_trial_naive_closed_form():
    rec = run_trial(bernoulli_instance([0.5] * 100), Config(0.2, 0.1), "naive", 0)
    assert rec.samples_total == 38100
    assert rec.event_E is None and rec.row()["event_E"] == ""


def test_run_trial_single_arm():
    rec = run_trial(bernoulli_instance([0.3]), Config(0.2, 0.1), "alg1", 0)
    assert rec.skyline_size == 1 and rec.valid and rec.samples_total > 0


def test_run_trial_unknown_algo():
    with pytest.raises(ValueError):
        run_trial(bernoulli_instance([0.3]), Config(0.2, 0.1), "magic", 0)


def test_derive_seed_stable():
    assert derive_seed(7, 256, 0.1, 0.1, 3) == derive_seed(7, 256, 0.1, 0.1, 3)
    assert derive_seed(7, 256, 0.1, 0.1, 3) != derive_seed(7, 256, 0.1, 0.1, 4)
    assert 0 <= derive_seed(2**70, "x") < 2**63


def small_config(**kw):
    d = dict(generator={"kind": "uniform"}, n=[256, 512], epsilon=[0.3], delta=[0.1], trials=1,
             base_seed=3, algos=["alg1+truncate"])
    d.update(kw)
    return SweepConfig.from_dict(d)


def test_sweep_rows_and_csv(tmp_path):
    out = tmp_path / "rows.csv"
    records = sweep(small_config(), out)
    assert len(records) == 2
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [int(r["n"]) for r in rows] == [256, 512]
    summary = list(csv.DictReader(open(tmp_path / "rows.summary.csv")))
    assert all(0 <= float(s["success_rate"]) <= 1 for s in summary)
    assert all(float(s["wilson_low"]) <= float(s["success_rate"]) <= float(s["wilson_high"]) for s in summary)


def test_sweep_reproducible_and_parallel_merge():
    cfg = small_config(n=[64, 128], trials=3, algos=["alg1", "naive"])
    serial = sweep(cfg)
    again = sweep(cfg)
    cfg.workers = 2
    parallel = sweep(cfg)
    assert strip_wall(serial) == strip_wall(again) == strip_wall(parallel)
    assert [(r.algo, r.n, r.trial_id) for r in serial][:3] == [("alg1", 64, 0), ("alg1", 64, 1), ("alg1", 64, 2)]


def test_sweep_algos_share_instances():
    recs = sweep(small_config(n=[40], trials=2, algos=["alg1", "naive"]))
    assert [r.seed for r in recs[:2]] == [r.seed for r in recs[2:]]


def test_sweep_bad_output_fails_before_trials(tmp_path, monkeypatch):
    import skyline_bandits.harness as h

    called = []
    monkeypatch.setattr(h, "_sweep_job", lambda job: called.append(job))
    with pytest.raises(OSError):
        sweep(small_config(), tmp_path / "missing" / "x.csv")
    assert called == []


def test_sweep_staircase_generator():
    recs = sweep(SweepConfig.from_dict(
        {"generator": {"kind": "staircase", "m": 4}, "epsilon": [0.125], "delta": [0.1], "trials": 2}
    ))
    assert len(recs) == 2 and all(r.n == 13 for r in recs)


@pytest.mark.parametrize(
    "bad",
    [
        {"generator": {"kind": "weird"}},
        {"trials": 0},
        {"epsilon": [1.5]},
        {"algos": ["alg2"]},
        {"n": [0]},
        {"colour": "blue"},
    ],
)
def test_sweep_config_validation(bad):
    with pytest.raises(ValueError):
        small_config(**bad)


def test_summary_and_wilson():
    lo, hi = wilson_interval(190, 200)
    assert lo < 0.95 < hi
    # closed form Wilson score interval for 190/200 at z=1.959964
    z, p, n = 1.959963984540054, 0.95, 200
    centre = (p + z * z / (2 * n)) / (1 + z * z / n)
    half = z / (1 + z * z / n) * ((p * (1 - p) / n + z * z / (4 * n * n)) ** 0.5)
    assert (lo, hi) == pytest.approx((centre - half, centre + half), abs=1e-9)
    recs = sweep(small_config(n=[30], trials=4))
    (row,) = summarize(recs)
    assert row["trials"] == 4 and 0 <= row["success_rate"] <= 1


def test_write_csv_format():
    rec = run_trial(bernoulli_instance([0.3, 0.9]), Config(0.2, 0.1), "alg1", 1)
    buf = io.StringIO()
    write_csv([rec], buf)
    header, line = buf.getvalue().splitlines()
    assert header == ",".join(CSV_COLUMNS)
    assert ",true," in line
