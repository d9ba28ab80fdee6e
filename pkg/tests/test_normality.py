"""D'Agostino-Pearson: symmetry, cross-implementation fixture, power/size."""

import random

import pytest
import scipy.stats

from srcmine.stats.normality import dagostino_pearson, skewness_z

# frozen 50-point fixture (seeded lognormal-ish mix, written out so the
# oracle comparison never depends on generator drift)
FIXTURE_50 = [
    2.14, 0.37, 1.02, 5.61, 0.88, 1.47, 3.05, 0.12, 2.77, 1.93,
    0.54, 4.28, 1.11, 0.73, 2.02, 6.35, 0.29, 1.58, 2.91, 0.95,
    1.24, 3.66, 0.48, 2.33, 1.76, 0.61, 5.02, 1.39, 0.83, 2.58,
    4.71, 1.05, 0.19, 3.24, 1.66, 2.21, 0.42, 1.89, 7.13, 0.68,
    2.45, 1.31, 0.57, 3.88, 1.14, 2.66, 0.91, 1.52, 4.05, 0.25,
]


def test_symmetric_sample_zero_skew_contribution():
    sample = [-3, -2, -1, 0, 1, 2, 3] * 5
    assert skewness_z(sample) == pytest.approx(0.0, abs=1e-12)


def test_fixture_matches_reference_implementation():
    ours = dagostino_pearson(FIXTURE_50)
    theirs = scipy.stats.normaltest(FIXTURE_50)
    assert ours.statistic == pytest.approx(float(theirs.statistic), abs=1e-6)
    assert ours.p_value == pytest.approx(float(theirs.pvalue), abs=1e-6)


def test_rejects_uniform_with_high_power():
    rejections = 0
    for seed in range(500):
        rng = random.Random(seed)
        sample = [rng.random() for _ in range(1000)]
        if dagostino_pearson(sample).reject_at_5pct:
            rejections += 1
    assert rejections / 500 > 0.90


def test_size_on_normal_samples_near_nominal():
    rejections = 0
    for seed in range(500):
        rng = random.Random(10_000 + seed)
        sample = [rng.gauss(0.0, 1.0) for _ in range(1000)]
        if dagostino_pearson(sample).reject_at_5pct:
            rejections += 1
    assert abs(rejections / 500 - 0.05) <= 0.03


def test_minimum_sample_size():
    with pytest.raises(ValueError):
        dagostino_pearson([1.0] * 19)


def test_zero_variance_error():
    with pytest.raises(ValueError):
        dagostino_pearson([2.0] * 25)
