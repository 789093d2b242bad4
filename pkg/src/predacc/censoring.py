"""Censoring-distribution estimation and inverse-probability weights.

The accuracy measures for censored data replace the uniform weight 1/n
by normalized inverse-probability-of-censoring weights

    w_i = (delta_i / G(T_i-)) / sum_j (delta_j / G(T_j-)),

where G is the survival function of the censoring time, estimated by the
Kaplan-Meier product-limit estimator with the roles of event and
censoring exchanged.  Censored rows get weight exactly zero; weights sum
to one.

Tie convention: when an event and a censoring share a time, the event is
removed from the risk set only after the censoring has been counted, so
delta = 1 rows remain at risk for censorings at their own time.  A
consequence is that G(T_i-) is strictly positive at every event time;
the zero-denominator clamp below is a defensive guard for externally
supplied censoring-survival estimates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateWeights, LengthMismatch
from .samples import CensoredSample

__all__ = [
    "StepSurvival",
    "WeightVector",
    "fit_censoring_km",
    "left_limit",
    "ipcw_weights",
    "ipcw_weights_covariate",
    "fit_censoring_cox",
    "uniform_weights",
]


@dataclass(frozen=True)
class StepSurvival:
    """Right-continuous piecewise-constant survival estimate.

    ``values[k]`` is the survival probability on ``[jump_times[k],
    jump_times[k+1])``; before the first jump the function equals 1.
    Jump times are strictly increasing, values nonincreasing in [0, 1].
    """

    jump_times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        jt = np.asarray(self.jump_times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if jt.shape != v.shape or jt.ndim != 1:
            raise LengthMismatch("jump_times and values must be equal-length 1-d arrays")
        if jt.size and np.any(np.diff(jt) <= 0):
            raise ValueError("jump_times must be strictly increasing")
        if np.any(v < 0) or np.any(v > 1) or (v.size and np.any(np.diff(v) > 0)):
            raise ValueError("values must be nonincreasing within [0, 1]")
        jt.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "jump_times", jt)
        object.__setattr__(self, "values", v)

    def survival(self, t) -> np.ndarray:
        """Evaluate G(t), right-continuous."""
        idx = np.searchsorted(self.jump_times, np.asarray(t, dtype=float), side="right")
        padded = np.concatenate(([1.0], self.values))
        return padded[idx]

    def left_limit(self, t) -> np.ndarray:
        """Evaluate G(t-): the value at the largest jump strictly before t."""
        idx = np.searchsorted(self.jump_times, np.asarray(t, dtype=float), side="left")
        padded = np.concatenate(([1.0], self.values))
        return padded[idx]


def left_limit(g: StepSurvival, t) -> np.ndarray:
    """Left-limit evaluation of a step survival function, ``G(t-)``."""
    return g.left_limit(t)


@dataclass(frozen=True)
class WeightVector:
    """Normalized nonnegative weights over the rows of a sample."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 1:
            raise LengthMismatch("weights must be one-dimensional")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.size


def uniform_weights(n: int) -> WeightVector:
    """Uniform weights 1/n, the no-censoring special case."""
    return WeightVector(np.full(n, 1.0 / n))


def fit_censoring_km(sample: CensoredSample) -> StepSurvival:
    """Kaplan-Meier estimate of the censoring survival function.

    Censored rows (delta = 0) play the role of events.  At each distinct
    time with ``c`` censorings among ``r`` at risk the survival
    multiplies by ``1 - c/r``, with the risk set counting every row
    whose follow-up time is >= that time (events at a tied time included).

    Returns
    -------
    StepSurvival
        Jumps only at times where at least one censoring occurred; the
        identity function (no jumps) when nothing is censored.
    """
    t = sample.t
    delta = sample.delta
    order = np.argsort(t, kind="stable")
    ts = t[order]
    cens = delta[order] == 0

    times, first = np.unique(ts, return_index=True)
    # rows at risk at each distinct time: everything from its first index on
    at_risk = ts.size - first
    n_cens = np.add.reduceat(cens.astype(np.int64), first)

    has_jump = n_cens > 0
    factors = 1.0 - n_cens[has_jump] / at_risk[has_jump]
    values = np.cumprod(factors)
    return StepSurvival(jump_times=times[has_jump], values=values)


def _weights_from_survival(delta: np.ndarray, g_left: np.ndarray) -> np.ndarray:
    """Normalize delta_i / G(T_i-) into weights, clamping zero denominators.

    Any event row whose censoring-survival value is exactly zero is
    clamped to the smallest positive value among the event rows, with a
    warning reporting the count.  If no positive value remains the
    weights are undefined.
    """
    g_left = np.asarray(g_left, dtype=float)
    raw = np.zeros_like(g_left)
    event = delta == 1
    zero = event & (g_left == 0.0)
    if zero.any():
        positive = g_left[event & (g_left > 0.0)]
        if positive.size == 0:
            raise DegenerateWeights(
                "censoring survival is zero at every event time"
            )
        floor = positive.min()
        warnings.warn(
            f"clamped {int(zero.sum())} zero censoring-survival value(s) "
            f"to {floor:g}",
            RuntimeWarning,
            stacklevel=3,
        )
        g_left = np.where(zero, floor, g_left)
    raw[event] = 1.0 / g_left[event]
    total = raw.sum()
    if not np.isfinite(total) or total <= 0:
        raise DegenerateWeights("weight mass is not positive and finite")
    return raw / total


def ipcw_weights(sample: CensoredSample, g: StepSurvival | None = None) -> WeightVector:
    """Inverse-probability-of-censoring weights from a marginal estimate.

    Parameters
    ----------
    sample : CensoredSample
    g : StepSurvival, optional
        Censoring survival estimate; fitted from the sample by
        :func:`fit_censoring_km` when omitted.
    """
    if g is None:
        g = fit_censoring_km(sample)
    return WeightVector(_weights_from_survival(sample.delta, g.left_limit(sample.t)))


def ipcw_weights_covariate(
    sample: CensoredSample,
    g_conditional: Callable[[np.ndarray, np.ndarray], np.ndarray],
) -> WeightVector:
    """Weights from a covariate-dependent censoring-survival estimate.

    Parameters
    ----------
    sample : CensoredSample
    g_conditional : callable
        ``g_conditional(t, x)`` returning the left limits ``G(t_i- | x_i)``
        for aligned arrays of times and covariate rows, e.g. the estimator
        returned by :func:`fit_censoring_cox`.

    Notes
    -----
    With no censored row the censoring distribution carries no events and
    any data-driven estimate of G is identically 1, so the weights are
    uniform regardless of ``g_conditional``.
    """
    if not np.any(sample.delta == 0):
        return uniform_weights(sample.n)
    g_left = np.asarray(g_conditional(sample.t, sample.x), dtype=float)
    if g_left.shape != sample.t.shape:
        raise LengthMismatch("g_conditional must return one value per row")
    return WeightVector(_weights_from_survival(sample.delta, g_left))


def fit_censoring_cox(sample: CensoredSample):
    """Fit a Cox model to the censoring times and return ``G(t- | x)``.

    The event indicator is flipped so that censorings are the modelled
    events, and the conditional survival is assembled from the Breslow
    baseline: ``G(t- | x) = exp(-H0(t-) exp(beta' x))``.

    Returns
    -------
    callable
        Suitable as the ``g_conditional`` argument of
        :func:`ipcw_weights_covariate`.
    """
    from .cox import breslow_baseline, fit_cox

    flipped = CensoredSample(t=sample.t, delta=1 - sample.delta, x=sample.x)
    fit = fit_cox(flipped)
    baseline = breslow_baseline(flipped, fit.beta)

    def g_conditional(t, x):
        risk = np.exp(np.asarray(x, dtype=float) @ fit.beta)
        return np.exp(-baseline.cumhaz_before(t) * risk)

    return g_conditional
