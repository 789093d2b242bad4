"""Validation behavior of the sample containers."""

import numpy as np
import pytest

from predacc import (
    CensoredSample,
    CompleteSample,
    PredictionVector,
    censoring_rate,
    validate_censored,
    validate_complete,
)
from predacc.errors import (
    AllCensored,
    InvalidIndicator,
    LengthMismatch,
    NonFiniteValue,
    TooFewRows,
)


def test_complete_sample_basic():
    s = CompleteSample(y=[1.0, 2.0, 3.0], x=[0.0, 1.0, 0.0])
    assert s.n == 3
    assert s.y.dtype == np.float64
    # 1-d covariates become a single column
    assert s.x.shape == (3, 1)


def test_complete_sample_matrix_covariates():
    x = np.arange(8.0).reshape(4, 2)
    s = CompleteSample(y=[1, 2, 3, 4], x=x)
    assert s.x.shape == (4, 2)
    assert np.array_equal(s.x, x)


def test_sample_arrays_are_readonly():
    s = CompleteSample(y=[1.0, 2.0], x=[0.0, 1.0])
    with pytest.raises(ValueError):
        s.y[0] = 99.0
    with pytest.raises(ValueError):
        s.x[0, 0] = 99.0


def test_complete_sample_rejects_mismatched_lengths():
    with pytest.raises(LengthMismatch):
        CompleteSample(y=[1.0, 2.0, 3.0], x=[0.0, 1.0])


def test_complete_sample_rejects_nonfinite():
    with pytest.raises(NonFiniteValue):
        CompleteSample(y=[1.0, np.nan], x=[0.0, 1.0])
    with pytest.raises(NonFiniteValue):
        CompleteSample(y=[1.0, 2.0], x=[0.0, np.inf])


def test_complete_sample_rejects_single_row():
    with pytest.raises(TooFewRows):
        CompleteSample(y=[1.0], x=[0.0])


def test_censored_sample_basic():
    s = CensoredSample(t=[1.0, 2.0, 3.0], delta=[1, 0, 1], x=[0.5, 1.5, 2.5])
    assert s.n == 3
    assert s.delta.dtype == np.int8
    assert np.array_equal(s.delta, [1, 0, 1])


def test_censored_sample_rejects_bad_indicator():
    with pytest.raises(InvalidIndicator):
        CensoredSample(t=[1.0, 2.0], delta=[1, 2], x=[0.0, 1.0])
    with pytest.raises(InvalidIndicator):
        CensoredSample(t=[1.0, 2.0], delta=[0.5, 1.0], x=[0.0, 1.0])


def test_censored_sample_rejects_all_censored():
    with pytest.raises(AllCensored):
        CensoredSample(t=[1.0, 2.0], delta=[0, 0], x=[0.0, 1.0])


def test_censored_sample_boolean_indicator_accepted():
    s = CensoredSample(t=[1.0, 2.0], delta=np.array([True, False]), x=[0.0, 1.0])
    assert np.array_equal(s.delta, [1, 0])


def test_validate_helpers_return_samples():
    c = validate_complete([1.0, 2.0], [0.0, 1.0])
    assert isinstance(c, CompleteSample)
    z = validate_censored([1.0, 2.0], [1, 1], [0.0, 1.0])
    assert isinstance(z, CensoredSample)


def test_censoring_rate():
    s = CensoredSample(t=[1, 2, 3, 4], delta=[1, 0, 1, 0], x=[0, 0, 1, 1])
    assert censoring_rate(s) == 0.5
    full = CensoredSample(t=[1, 2], delta=[1, 1], x=[0, 1])
    assert censoring_rate(full) == 0.0


def test_prediction_vector_validation():
    m = PredictionVector([1.0, 2.0, 3.0])
    assert m.n == 3
    with pytest.raises(NonFiniteValue):
        PredictionVector([1.0, np.nan])
    with pytest.raises(LengthMismatch):
        PredictionVector(np.zeros((2, 2)))


def test_prediction_vector_readonly():
    m = PredictionVector([1.0, 2.0])
    with pytest.raises(ValueError):
        m.m[0] = 5.0
