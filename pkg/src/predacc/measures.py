"""Paired prediction-accuracy measures R-squared and L-squared.

For a prediction function m evaluated on the sample, the corrected
predictor is the (weighted) least-squares calibration a + b*m of the
response on the predictions.  Writing mc_i for its fitted values and
Tbar for the weighted mean response, two exact decompositions hold:

    sum_i w_i (T_i - Tbar)^2 = sum_i w_i (mc_i - Tbar)^2
                             + sum_i w_i (T_i - mc_i)^2
    sum_i w_i (T_i - m_i)^2  = sum_i w_i (T_i - mc_i)^2
                             + sum_i w_i (mc_i - m_i)^2

R-squared is the explained share of the first identity and equals the
weighted squared Pearson correlation between response and predictions;
L-squared is the share of the mean squared prediction error that
survives the affine correction.  Every sum here is accumulated with
compensated summation (``math.fsum``) so that the identities hold to
1e-10 relative error even at n = 10**6, where naive accumulation fails.

Complete data is the uniform-weight special case w_i = 1/n; both entry
points share one code path, which makes the no-censoring reduction exact
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .censoring import WeightVector, ipcw_weights, uniform_weights
from .errors import (
    DegenerateCorrelation,
    LengthMismatch,
    ZeroTotalVariance,
)
from .samples import CensoredSample, CompleteSample, PredictionVector
from .samples import censoring_rate as _censoring_rate

__all__ = [
    "CorrectedPredictor",
    "AccuracyReport",
    "corrected_predictor",
    "accuracy_complete",
    "accuracy_censored",
    "decomposition_check",
    "squared_correlation",
]

#: fixed relative tolerance for the two decomposition identities
DECOMPOSITION_RTOL = 1e-10


def _fsum(values: np.ndarray) -> float:
    # exact compensated sum of the already-rounded products
    return math.fsum(values.tolist())


@dataclass(frozen=True)
class CorrectedPredictor:
    """Affine recalibration a + b*m of predictions against the response.

    ``degenerate`` marks the constant-predictor convention: slope 0 and
    intercept equal to the weighted mean response.
    """

    intercept: float
    slope: float
    weighted: bool
    degenerate: bool = False

    def apply(self, m: np.ndarray) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(m, dtype=float)


@dataclass(frozen=True)
class AccuracyReport:
    """R-squared, L-squared and the sums they are built from.

    All *_ss fields and ``mspe`` are weighted sums of squares
    (uniform weights 1/n for complete data), so
    ``total_ss = explained_ss + residual_ss`` and
    ``mspe = residual_ss + correction_gap_ss``.
    """

    r2: float
    l2: float
    total_ss: float
    explained_ss: float
    residual_ss: float
    mspe: float
    correction_gap_ss: float
    weighted_mean: float
    n: int
    censoring_rate: float
    corrected: CorrectedPredictor


def _check_aligned(n: int, m: PredictionVector) -> np.ndarray:
    if m.n != n:
        raise LengthMismatch(f"predictions have {m.n} rows, sample has {n}")
    return m.m


def corrected_predictor(
    response: np.ndarray, m: np.ndarray, w: np.ndarray
) -> CorrectedPredictor:
    """Weighted least-squares slope and intercept of response on predictions.

    Closed forms: ``b = sum w (T - Tbar)(m - mbar) / sum w (m - mbar)^2``
    and ``a = Tbar - b * mbar``.  A constant predictor (zero weighted
    variance) degenerates to slope 0, intercept ``Tbar``.
    """
    if isinstance(m, PredictionVector):
        m = m.m
    if isinstance(w, WeightVector):
        w = w.w
    response = np.asarray(response, dtype=float)
    m = np.asarray(m, dtype=float)
    weighted = bool(np.ptp(w) > 0)
    tbar = _fsum(w * response)
    mbar = _fsum(w * m)
    s_mm = _fsum(w * (m - mbar) ** 2)
    if s_mm == 0.0:
        return CorrectedPredictor(
            intercept=tbar, slope=0.0, weighted=weighted, degenerate=True
        )
    s_tm = _fsum(w * (response - tbar) * (m - mbar))
    slope = s_tm / s_mm
    return CorrectedPredictor(intercept=tbar - slope * mbar, slope=slope, weighted=weighted)


def _accuracy(
    response: np.ndarray,
    m: np.ndarray,
    w: np.ndarray,
    n: int,
    cens_rate: float,
) -> AccuracyReport:
    tbar = _fsum(w * response)
    total_ss = _fsum(w * (response - tbar) ** 2)
    if total_ss == 0.0:
        raise ZeroTotalVariance("response is constant; R-squared undefined")

    corrected = corrected_predictor(response, m, w)
    mc = corrected.apply(m)

    explained_ss = _fsum(w * (mc - tbar) ** 2)
    residual_ss = _fsum(w * (response - mc) ** 2)
    mspe = _fsum(w * (response - m) ** 2)
    correction_gap_ss = _fsum(w * (mc - m) ** 2)

    r2 = 0.0 if corrected.degenerate else explained_ss / total_ss
    # a zero MSPE means m already interpolates the weighted sample
    l2 = 1.0 if mspe == 0.0 else residual_ss / mspe

    return AccuracyReport(
        r2=r2,
        l2=l2,
        total_ss=total_ss,
        explained_ss=explained_ss,
        residual_ss=residual_ss,
        mspe=mspe,
        correction_gap_ss=correction_gap_ss,
        weighted_mean=tbar,
        n=n,
        censoring_rate=cens_rate,
        corrected=corrected,
    )


def accuracy_complete(sample: CompleteSample, m: PredictionVector) -> AccuracyReport:
    """Accuracy measures for fully observed data (uniform weights 1/n)."""
    pred = _check_aligned(sample.n, m)
    return _accuracy(sample.y, pred, uniform_weights(sample.n).w, sample.n, 0.0)


def accuracy_censored(
    sample: CensoredSample,
    m: PredictionVector,
    w: WeightVector | None = None,
) -> AccuracyReport:
    """Accuracy measures for right-censored data under IPCW weights.

    Parameters
    ----------
    sample : CensoredSample
    m : PredictionVector
        Predictions for every row, censored ones included (their weight
        is zero).
    w : WeightVector, optional
        Row weights; computed by :func:`predacc.censoring.ipcw_weights`
        when omitted.  Pass weights from
        :func:`predacc.censoring.ipcw_weights_covariate` for
        covariate-dependent censoring.
    """
    pred = _check_aligned(sample.n, m)
    if w is None:
        w = ipcw_weights(sample)
    elif w.n != sample.n:
        raise LengthMismatch(f"weights have {w.n} rows, sample has {sample.n}")
    return _accuracy(sample.t, pred, w.w, sample.n, _censoring_rate(sample))


def decomposition_check(report: AccuracyReport, rtol: float = DECOMPOSITION_RTOL) -> bool:
    """Verify both decomposition identities at relative tolerance ``rtol``."""
    variance_gap = abs(report.total_ss - (report.explained_ss + report.residual_ss))
    error_gap = abs(report.mspe - (report.residual_ss + report.correction_gap_ss))
    ok_variance = variance_gap <= rtol * max(report.total_ss, 1.0e-300)
    ok_error = report.mspe == 0.0 or error_gap <= rtol * report.mspe
    return bool(ok_variance and ok_error)


def squared_correlation(response, m, w=None) -> float:
    """Weighted squared Pearson correlation between response and predictions.

    Equals the R-squared of the corrected predictor whenever both are
    defined.  Raises :class:`DegenerateCorrelation` if either argument is
    constant under the weights.
    """
    if isinstance(m, PredictionVector):
        m = m.m
    response = np.asarray(response, dtype=float)
    m = np.asarray(m, dtype=float)
    if response.shape != m.shape:
        raise LengthMismatch("response and predictions must have equal length")
    if w is None:
        w = np.full(response.size, 1.0 / response.size)
    elif isinstance(w, WeightVector):
        w = w.w
    tbar = _fsum(w * response)
    mbar = _fsum(w * m)
    s_tt = _fsum(w * (response - tbar) ** 2)
    s_mm = _fsum(w * (m - mbar) ** 2)
    if s_tt == 0.0 or s_mm == 0.0:
        raise DegenerateCorrelation("constant argument; correlation undefined")
    s_tm = _fsum(w * (response - tbar) * (m - mbar))
    return (s_tm * s_tm) / (s_tt * s_mm)
