import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from skyline_bandits.arms import SamplingOracle, bernoulli_instance, deterministic_instance
from skyline_bandits.harness import wilson_interval
from skyline_bandits.subroutines import (
    FIND_BEST_CONSTANT,
    est_mean,
    find_best,
    hoeffding_samples,
    median_elimination,
    uniform_best,
)
from skyline_bandits.verify import is_eps_best


def hoeffding_oracle(eps, delta):
    # 50-digit evaluation, independent of float rounding
    with mpmath.workdps(50):
        return int(mpmath.ceil(mpmath.log(2 / mpmath.mpf(delta)) / (2 * mpmath.mpf(eps) ** 2)))


def test_hoeffding_values():
    assert hoeffding_oracle(0.1, 0.05) == 185
    assert hoeffding_samples(0.1, 0.05) == 185
    assert hoeffding_oracle(0.5, 0.5) == 3
    assert hoeffding_samples(0.5, 0.5) == 3


@given(eps=st.floats(0.01, 0.99), delta=st.floats(1e-6, 0.99))
def test_hoeffding_halving_delta(eps, delta):
    a, b = hoeffding_samples(eps, delta), hoeffding_samples(eps, delta / 2)
    assert a <= b <= a + math.ceil(math.log(2) / (2 * eps * eps)) + 1


@pytest.mark.parametrize("eps,delta", [(0, 0.1), (1, 0.1), (0.1, 0), (0.1, 1), (-0.2, 0.5)])
def test_hoeffding_rejects_bad_params(eps, delta):
    with pytest.raises(ValueError):
        hoeffding_samples(eps, delta)


def test_est_mean_deterministic_arm():
    o = SamplingOracle(deterministic_instance([0.7]), seed=0)
    rec = est_mean(o, 0, 0.03, 0.2)
    assert rec.estimate == 0.7
    assert rec.samples_used == hoeffding_samples(0.03, 0.2) == o.pulls_total


def test_est_mean_sample_count():
    o = SamplingOracle(bernoulli_instance([0.5]), seed=0)
    assert est_mean(o, 0, 0.1, 0.05).samples_used == 185
    assert o.pulls_total == 185


def test_est_mean_pac_rate():
    hits = 0
    for seed in range(1000):
        o = SamplingOracle(bernoulli_instance([0.5]), seed=seed)
        hits += abs(est_mean(o, 0, 0.1, 0.05).estimate - 0.5) <= 0.1
    assert hits >= 950
    assert wilson_interval(hits, 1000)[0] >= 0.95


def test_find_best_singleton_no_pulls():
    o = SamplingOracle(bernoulli_instance([0.2, 0.8]), seed=0)
    assert find_best(o, range(1, 2), 0.1, 0.1) == 1
    assert o.pulls_total == 0


def test_find_best_empty_block():
    o = SamplingOracle(bernoulli_instance([0.2]), seed=0)
    with pytest.raises(ValueError):
        find_best(o, range(0), 0.1, 0.1)


@pytest.mark.parametrize("strategy", [median_elimination, uniform_best])
def test_find_best_deterministic(strategy):
    for seed in range(5):
        o = SamplingOracle(deterministic_instance([0.1, 0.9, 0.3]), seed=seed)
        assert find_best(o, range(3), 0.05, 0.1, strategy) == 1


def test_find_best_ties_lowest_index():
    o = SamplingOracle(deterministic_instance([0.4, 0.9, 0.9, 0.9]), seed=0)
    assert find_best(o, range(4), 0.1, 0.1) == 1
    o = SamplingOracle(deterministic_instance([0.4, 0.9, 0.9, 0.9]), seed=0)
    assert find_best(o, range(4), 0.1, 0.1, uniform_best) == 1


@pytest.mark.parametrize("strategy", [median_elimination, uniform_best])
def test_find_best_two_arm_gap(strategy):
    means = [0.4, 0.6]
    ok = 0
    for seed in range(500):
        o = SamplingOracle(bernoulli_instance(means), seed=seed)
        ok += is_eps_best(means, range(2), find_best(o, range(2), 0.1, 0.1, strategy), 0.1)
    assert ok >= 450


def test_find_best_pull_count_seed_independent():
    counts = set()
    for seed in range(5):
        o = SamplingOracle(bernoulli_instance(np.linspace(0, 1, 37)), seed=seed)
        find_best(o, range(37), 0.2, 0.05)
        counts.add(o.pulls_total)
    assert len(counts) == 1


@pytest.mark.parametrize("size", [10, 100, 1000])
@pytest.mark.parametrize("eps,delta", [(0.1, 0.1), (0.5, 0.5), (0.05, 1e-6)])
def test_find_best_budget_linear(size, eps, delta):
    o = SamplingOracle(deterministic_instance([0.5] * size), seed=0)
    find_best(o, range(size), eps, delta)
    assert o.pulls_total <= FIND_BEST_CONSTANT * size / eps**2 * math.log(1 / delta)
