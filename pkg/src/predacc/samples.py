"""Validated data containers for complete and right-censored samples.

A complete sample holds a real response ``y`` and a covariate matrix
``x``; a censored sample holds follow-up times ``t``, event indicators
``delta`` (1 = event observed, 0 = censored) and covariates.  Responses
and follow-up times may be nonpositive: nothing in the accuracy measures
requires positivity, only model fitters that take logs do.  All arrays
are validated once at construction and frozen afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllCensored,
    InvalidIndicator,
    LengthMismatch,
    NonFiniteValue,
    TooFewRows,
)

__all__ = [
    "CompleteSample",
    "CensoredSample",
    "PredictionVector",
    "validate_complete",
    "validate_censored",
    "censoring_rate",
]


def _as_response(y, name: str) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise LengthMismatch(f"{name} must be one-dimensional, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise NonFiniteValue(f"{name} contains non-finite values")
    return y


def _as_covariates(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise LengthMismatch(f"covariates must be a matrix, got shape {x.shape}")
    if x.shape[0] != n:
        raise LengthMismatch(f"covariates have {x.shape[0]} rows, expected {n}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteValue("covariates contain non-finite values")
    return x


@dataclass(frozen=True)
class CompleteSample:
    """Fully observed responses with covariates.

    Parameters
    ----------
    y : (n,) array_like
        Observed responses.
    x : (n, p) array_like
        Covariate matrix; a 1-d array is treated as a single column.
    """

    y: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        y = _as_response(self.y, "y")
        if y.size < 2:
            raise TooFewRows(f"need at least 2 rows, got {y.size}")
        x = _as_covariates(self.x, y.size)
        y.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.y.size


@dataclass(frozen=True)
class CensoredSample:
    """Right-censored follow-up data with covariates.

    Parameters
    ----------
    t : (n,) array_like
        Observed follow-up times, ``min(event time, censoring time)``.
    delta : (n,) array_like
        Event indicators; 1 when the event was observed, 0 when censored.
        At least one row must be an event.
    x : (n, p) array_like
        Covariate matrix; a 1-d array is treated as a single column.
    """

    t: np.ndarray
    delta: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        t = _as_response(self.t, "t")
        if t.size < 2:
            raise TooFewRows(f"need at least 2 rows, got {t.size}")
        delta = np.asarray(self.delta)
        if delta.shape != t.shape:
            raise LengthMismatch(
                f"delta has shape {delta.shape}, expected {t.shape}"
            )
        values = np.unique(delta)
        if not np.all(np.isin(values, (0, 1))):
            raise InvalidIndicator(f"delta values must be 0 or 1, got {values}")
        delta = delta.astype(np.int8)
        if not delta.any():
            raise AllCensored("every row is censored; no event to weight")
        x = _as_covariates(self.x, t.size)
        for arr in (t, delta, x):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.t.size


@dataclass(frozen=True)
class PredictionVector:
    """Predicted responses aligned with the rows of a sample."""

    m: np.ndarray

    def __post_init__(self):
        m = _as_response(self.m, "m")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return self.m.size


def validate_complete(y, x) -> CompleteSample:
    """Build a validated :class:`CompleteSample` from raw arrays."""
    return CompleteSample(y=y, x=x)


def validate_censored(t, delta, x) -> CensoredSample:
    """Build a validated :class:`CensoredSample` from raw arrays."""
    return CensoredSample(t=t, delta=delta, x=x)


def censoring_rate(sample: CensoredSample) -> float:
    """Fraction of censored rows, ``1 - mean(delta)``."""
    return 1.0 - float(np.mean(sample.delta))
