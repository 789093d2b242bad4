"""Censoring-distribution estimates and IPCW weight construction."""

import numpy as np
import pytest

from predacc import (
    CensoredSample,
    StepSurvival,
    WeightVector,
    fit_censoring_cox,
    fit_censoring_km,
    ipcw_weights,
    ipcw_weights_covariate,
    left_limit,
    uniform_weights,
)
from predacc.censoring import _weights_from_survival
from predacc.errors import DegenerateWeights
from predacc.simulation import AftWeibullDesign, IndependentCensoring, gen_aft_weibull


@pytest.fixture
def four_point():
    # one censored row at t=2 among four follow-up times
    return CensoredSample(t=[1.0, 2.0, 3.0, 4.0], delta=[1, 0, 1, 1], x=[0.0, 0.0, 0.0, 0.0])


def test_step_survival_evaluation():
    g = StepSurvival(jump_times=np.array([2.0, 5.0]), values=np.array([0.8, 0.4]))
    assert g.survival(1.0) == 1.0
    assert g.survival(2.0) == 0.8  # right continuous at the jump
    assert g.survival(4.9) == 0.8
    assert g.survival(5.0) == 0.4
    assert g.survival(100.0) == 0.4


def test_step_survival_left_limits():
    g = StepSurvival(jump_times=np.array([2.0, 5.0]), values=np.array([0.8, 0.4]))
    assert g.left_limit(2.0) == 1.0
    assert g.left_limit(2.5) == 0.8
    assert g.left_limit(5.0) == 0.8
    assert g.left_limit(6.0) == 0.4
    assert left_limit(g, 5.0) == 0.8


def test_step_survival_rejects_bad_shapes():
    with pytest.raises(ValueError):
        StepSurvival(jump_times=np.array([2.0, 1.0]), values=np.array([0.8, 0.4]))
    with pytest.raises(ValueError):
        StepSurvival(jump_times=np.array([1.0, 2.0]), values=np.array([0.4, 0.8]))


def test_censoring_km_four_point(four_point):
    g = fit_censoring_km(four_point)
    # single censoring at t=2 with 3 rows still at risk: G drops to 2/3
    assert np.array_equal(g.jump_times, [2.0])
    assert np.allclose(g.values, [2.0 / 3.0])
    assert g.left_limit(2.0) == 1.0
    assert g.survival(2.0) == pytest.approx(2.0 / 3.0)


def test_censoring_km_no_censoring_is_identity():
    s = CensoredSample(t=[3.0, 1.0, 2.0], delta=[1, 1, 1], x=[0, 0, 0])
    g = fit_censoring_km(s)
    assert g.jump_times.size == 0
    assert np.all(g.survival([0.0, 1.5, 10.0]) == 1.0)


def test_censoring_km_event_ties_stay_at_risk():
    # event at t=2 is counted in the risk set of the censoring at t=2
    s = CensoredSample(t=[1.0, 2.0, 2.0, 3.0], delta=[1, 1, 0, 1], x=[0, 0, 0, 0])
    g = fit_censoring_km(s)
    assert np.array_equal(g.jump_times, [2.0])
    assert np.allclose(g.values, [1.0 - 1.0 / 3.0])


def test_ipcw_weights_four_point(four_point):
    w = ipcw_weights(four_point)
    # raw weights delta_i / G(T_i-): (1, 0, 3/2, 3/2), normalized to sum 1
    assert np.allclose(w.w, [0.25, 0.0, 0.375, 0.375])
    assert w.w.sum() == pytest.approx(1.0, abs=1e-15)


def test_ipcw_weights_uniform_without_censoring():
    s = CensoredSample(t=[5.0, 1.0, 3.0], delta=[1, 1, 1], x=[0, 0, 0])
    w = ipcw_weights(s)
    assert np.allclose(w.w, 1.0 / 3.0)


def test_ipcw_weights_zero_only_on_censored_rows():
    s = CensoredSample(t=[1.0, 2.0, 3.0, 4.0], delta=[1, 1, 0, 0], x=[0, 0, 0, 0])
    w = ipcw_weights(s)
    # late censorings never reduce G before the early event times
    assert np.allclose(w.w, [0.5, 0.5, 0.0, 0.0])


def test_ipcw_weight_properties_random():
    rng = np.random.default_rng(20240817)
    for _ in range(200):
        n = int(rng.integers(3, 60))
        t = rng.exponential(1.0, n)
        delta = rng.integers(0, 2, n)
        if delta.sum() == 0:
            delta[int(rng.integers(0, n))] = 1
        s = CensoredSample(t=t, delta=delta, x=rng.normal(size=n))
        w = ipcw_weights(s)
        assert abs(w.w.sum() - 1.0) <= 1e-12
        assert np.all(w.w >= 0)
        # censored rows get zero, event rows positive (KM keeps events at
        # risk at ties, so G(T-) > 0 wherever delta = 1)
        assert np.all(w.w[s.delta == 0] == 0.0)
        assert np.all(w.w[s.delta == 1] > 0.0)


def test_weight_clamping_warns():
    # a hand-built survival that is exactly zero before the last event
    delta = np.array([1, 1, 1], dtype=np.int8)
    g_left = np.array([1.0, 0.5, 0.0])
    with pytest.warns(RuntimeWarning, match="clamped 1"):
        w = _weights_from_survival(delta, g_left)
    # the zero is replaced by the smallest positive value, 0.5
    assert np.allclose(w, np.array([1.0, 2.0, 2.0]) / 5.0)


def test_weights_degenerate_when_all_zero():
    delta = np.array([1, 1], dtype=np.int8)
    with pytest.raises(DegenerateWeights):
        _weights_from_survival(delta, np.array([0.0, 0.0]))


def test_weight_vector_validation():
    with pytest.raises(ValueError):
        WeightVector(np.array([0.5, 0.4]))  # does not sum to one
    with pytest.raises(ValueError):
        WeightVector(np.array([1.5, -0.5]))
    u = uniform_weights(4)
    assert np.allclose(u.w, 0.25)


def test_covariate_weights_match_marginal_when_g_is_marginal(four_point):
    g = fit_censoring_km(four_point)

    def marginal(t, x):
        return g.left_limit(t)

    w_cov = ipcw_weights_covariate(four_point, marginal)
    w_km = ipcw_weights(four_point)
    assert np.array_equal(w_cov.w, w_km.w)


def test_covariate_weights_uniform_without_censoring():
    s = CensoredSample(t=[1.0, 2.0, 3.0], delta=[1, 1, 1], x=[0.0, 1.0, 2.0])
    called = []

    def g_cond(t, x):
        called.append(True)
        return np.zeros_like(t)

    w = ipcw_weights_covariate(s, g_cond)
    assert np.allclose(w.w, 1.0 / 3.0)
    assert not called  # short-circuits before evaluating G


def test_censoring_cox_zero_covariate_matches_km():
    # with a constant covariate the Cox censoring model has beta = 0 and
    # its Breslow survival agrees with Kaplan-Meier to first order; on
    # this 4-point sample G(t-) only matters at the event times, where
    # the Breslow exponential form gives exp(-1/3) instead of 2/3
    s = CensoredSample(t=[1.0, 2.0, 3.0, 4.0], delta=[1, 0, 1, 1], x=[0.0, 0.0, 0.0, 0.0])
    g_cond = fit_censoring_cox(s)
    g_left = g_cond(s.t, s.x)
    assert g_left[0] == pytest.approx(1.0)
    assert g_left[1] == pytest.approx(1.0)
    # after the censoring at t=2: exp(-H0) with H0 = 1/3
    assert g_left[2] == pytest.approx(np.exp(-1.0 / 3.0), rel=1e-12)
    assert g_left[3] == pytest.approx(np.exp(-1.0 / 3.0), rel=1e-12)


def test_censoring_cox_weights_close_to_km_under_independence():
    rng = np.random.default_rng(7)
    design = AftWeibullDesign(n=400, censoring=IndependentCensoring(scale=3.0))
    s = gen_aft_weibull(design, rng)
    w_km = ipcw_weights(s)
    w_cox = ipcw_weights_covariate(s, fit_censoring_cox(s))
    # same zero pattern, similar magnitudes
    assert np.array_equal(w_km.w == 0.0, w_cox.w == 0.0)
    assert np.max(np.abs(w_km.w - w_cox.w)) < 0.5 * np.max(w_km.w)


def test_ipcw_mean_recovers_uncensored_mean():
    # E(Y) = E(e^X) Gamma(1.15) with X uniform: (e - 1) * 0.933041...
    import math

    target = (math.e - 1.0) * math.gamma(1.15)
    rng = np.random.default_rng(20240818)
    design = AftWeibullDesign(n=4000, censoring=IndependentCensoring(scale=3.9))
    s = gen_aft_weibull(design, rng)
    assert 0.1 < 1.0 - s.delta.mean() < 0.45
    w = ipcw_weights(s).w
    est = float(w @ s.t)
    se = math.sqrt(float(np.sum(w**2 * (s.t - est) ** 2)))
    assert abs(est - target) < 4.0 * se
    assert abs(est - target) < 0.1
