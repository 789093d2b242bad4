"""Percentile bootstrap for the paired accuracy measures."""

import numpy as np
import pytest

from predacc import (
    CensoredSample,
    CompleteSample,
    PredictionVector,
    accuracy_censored,
    accuracy_complete,
    bootstrap_accuracy,
)
from predacc.errors import TooManyFailures, ZeroTotalVariance


def eval_complete(sample, rows):
    fit_m = 0.8 * sample.y + 0.3 * sample.x[:, 0]
    return accuracy_complete(sample, PredictionVector(fit_m))


@pytest.fixture
def noisy_sample():
    rng = np.random.default_rng(5150)
    n = 80
    x = rng.normal(size=n)
    y = 1.0 + 0.7 * x + 0.6 * rng.normal(size=n)
    return CompleteSample(y=y, x=x)


def test_bootstrap_deterministic(noisy_sample):
    def ev(s, rows):
        return accuracy_complete(s, PredictionVector(s.x[:, 0]))

    a = bootstrap_accuracy(noisy_sample, ev, b=50, seed=33)
    b = bootstrap_accuracy(noisy_sample, ev, b=50, seed=33)
    assert np.array_equal(a.replicates, b.replicates)
    assert a.ci_r2 == b.ci_r2 and a.ci_l2 == b.ci_l2
    c = bootstrap_accuracy(noisy_sample, ev, b=50, seed=34)
    assert not np.array_equal(a.replicates, c.replicates)


def test_bootstrap_point_estimate_uses_full_sample(noisy_sample):
    def ev(s, rows):
        return accuracy_complete(s, PredictionVector(s.x[:, 0]))

    res = bootstrap_accuracy(noisy_sample, ev, b=10, seed=1)
    direct = ev(noisy_sample, np.arange(noisy_sample.n))
    assert res.point == (direct.r2, direct.l2)


def test_bootstrap_single_replicate(noisy_sample):
    def ev(s, rows):
        return accuracy_complete(s, PredictionVector(s.x[:, 0]))

    res = bootstrap_accuracy(noisy_sample, ev, b=1, seed=0)
    assert res.replicates.shape == (1, 2)
    # one replicate collapses both interval endpoints onto it
    assert res.ci_r2[0] == res.ci_r2[1] == res.replicates[0, 0]


def test_bootstrap_interval_brackets_replicates(noisy_sample):
    def ev(s, rows):
        return accuracy_complete(s, PredictionVector(s.x[:, 0]))

    res = bootstrap_accuracy(noisy_sample, ev, b=200, seed=7)
    r2s = res.replicates[:, 0]
    assert r2s.min() <= res.ci_r2[0] <= res.ci_r2[1] <= r2s.max()
    narrow = bootstrap_accuracy(noisy_sample, ev, b=200, seed=7, level=0.5)
    assert (narrow.ci_r2[1] - narrow.ci_r2[0]) <= (res.ci_r2[1] - res.ci_r2[0])


def test_bootstrap_rejects_bad_arguments(noisy_sample):
    def ev(s, rows):
        return accuracy_complete(s, PredictionVector(s.x[:, 0]))

    with pytest.raises(ValueError):
        bootstrap_accuracy(noisy_sample, ev, b=0)
    with pytest.raises(ValueError):
        bootstrap_accuracy(noisy_sample, ev, b=10, level=1.5)


def test_bootstrap_too_many_failures():
    # three rows with only two distinct responses: about a third of the
    # resamples are constant and fail with ZeroTotalVariance
    s = CompleteSample(y=[1.0, 1.0, 2.0], x=[0.0, 1.0, 2.0])

    def ev(sample, rows):
        return accuracy_complete(sample, PredictionVector(sample.x[:, 0]))

    with pytest.raises(TooManyFailures):
        bootstrap_accuracy(s, ev, b=60, seed=12)


def test_bootstrap_few_failures_warn_and_drop(noisy_sample):
    calls = {"k": 0}

    def flaky(sample, rows):
        calls["k"] += 1
        if calls["k"] % 25 == 0:
            raise ZeroTotalVariance("synthetic failure")
        return accuracy_complete(sample, PredictionVector(sample.x[:, 0]))

    with pytest.warns(RuntimeWarning, match="dropped"):
        res = bootstrap_accuracy(noisy_sample, flaky, b=50, seed=3)
    assert res.failures == 2
    assert res.replicates.shape == (48, 2)


def test_bootstrap_external_predictions_follow_rows():
    # predictions pinned to rows of the original sample: when resampling
    # respects row identity, every replicate keeps the exact linear link
    rng = np.random.default_rng(77)
    y = rng.normal(size=40)
    fixed = PredictionVector(2.0 * y + 1.0)
    s = CompleteSample(y=y, x=np.zeros(40))

    def ev(sample, rows):
        return accuracy_complete(sample, PredictionVector(fixed.m[rows]))

    res = bootstrap_accuracy(s, ev, b=100, seed=9)
    assert np.allclose(res.replicates[:, 0], 1.0, atol=1e-12)
    # the raw predictor is off by an affine map, so its corrected
    # version removes all of the prediction error
    assert np.allclose(res.replicates[:, 1], 0.0, atol=1e-12)


def test_bootstrap_censored_model_refits():
    from predacc.pipeline import evaluate_sample

    rng = np.random.default_rng(5151)
    n = 120
    x = rng.normal(size=n)
    t = np.exp(0.8 * x + 0.5 * rng.normal(size=n))
    c = rng.exponential(3.0, n)
    s = CensoredSample(t=np.minimum(t, c), delta=(t <= c).astype(int), x=x)

    def ev(sample, rows):
        return evaluate_sample(sample, "cox", kind="mean")

    res = bootstrap_accuracy(s, ev, b=60, seed=21)
    assert res.failures <= 6
    assert 0.0 <= res.ci_r2[0] <= res.ci_r2[1] <= 1.0
    # interval should cover the point estimate for a stable statistic
    assert res.ci_r2[0] - 0.05 <= res.point[0] <= res.ci_r2[1] + 0.05
