"""Nonparametric bootstrap confidence intervals for (R^2, L^2).

Whole rows are resampled with replacement and the entire pipeline --
censoring-distribution estimate, model fit, predictions, weights,
measures -- is recomputed on every replicate.  Replicate r draws from
its own RNG stream keyed by (seed, r), so results do not depend on
evaluation order and are reproducible from the seed alone.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import PredaccError, TooManyFailures
from .measures import AccuracyReport
from .samples import CensoredSample, CompleteSample

__all__ = ["BootstrapResult", "bootstrap_accuracy"]

DEFAULT_REPLICATES = 1000
DEFAULT_LEVEL = 0.95
#: fraction of failed replicates beyond which the run is abandoned
FAILURE_LIMIT = 0.10


@dataclass(frozen=True)
class BootstrapResult:
    """Point estimates, successful replicates and percentile intervals."""

    point: tuple[float, float]
    replicates: np.ndarray
    ci_r2: tuple[float, float]
    ci_l2: tuple[float, float]
    level: float
    seed: int
    failures: int

    def __post_init__(self):
        self.replicates.setflags(write=False)


def _take_rows(sample, idx: np.ndarray):
    if isinstance(sample, CensoredSample):
        return CensoredSample(t=sample.t[idx], delta=sample.delta[idx], x=sample.x[idx])
    return CompleteSample(y=sample.y[idx], x=sample.x[idx])


def bootstrap_accuracy(
    sample: CensoredSample | CompleteSample,
    evaluate: Callable[[CensoredSample | CompleteSample, np.ndarray], AccuracyReport],
    b: int = DEFAULT_REPLICATES,
    level: float = DEFAULT_LEVEL,
    seed: int = 0,
) -> BootstrapResult:
    """Percentile bootstrap intervals for the paired accuracy measures.

    Parameters
    ----------
    sample : CensoredSample or CompleteSample
        Original data; rows are resampled with replacement.
    evaluate : callable
        Full pipeline ``evaluate(sample, rows) -> AccuracyReport``, where
        ``rows`` holds the original-row indices behind the sample (so
        externally supplied predictions can travel with their rows).
        Called once on the original data for the point estimate and once
        per replicate; any :class:`~predacc.errors.PredaccError` it
        raises marks that replicate as failed.
    b : int
        Number of replicates (default 1000).
    level : float
        Interval coverage (default 0.95).
    seed : int
        Master seed for the replicate streams.

    Raises
    ------
    TooManyFailures
        If more than 10 percent of replicates fail; below that the
        failed replicates are dropped with a warning.
    """
    if b < 1:
        raise ValueError("need at least one bootstrap replicate")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be inside (0, 1)")
    point = evaluate(sample, np.arange(sample.n))

    rows = []
    failures = 0
    for rep in range(b):
        rng = np.random.default_rng([seed, rep])
        idx = rng.integers(0, sample.n, sample.n)
        try:
            report = evaluate(_take_rows(sample, idx), idx)
        except PredaccError:
            failures += 1
            continue
        rows.append((report.r2, report.l2))

    if failures > FAILURE_LIMIT * b:
        raise TooManyFailures(f"{failures} of {b} bootstrap replicates failed")
    if failures:
        warnings.warn(
            f"dropped {failures} failed bootstrap replicate(s) of {b}",
            RuntimeWarning,
            stacklevel=2,
        )

    replicates = np.asarray(rows, dtype=float).reshape(-1, 2)
    alpha = 1.0 - level
    lo, hi = alpha / 2.0, 1.0 - alpha / 2.0
    ci_r2 = tuple(np.quantile(replicates[:, 0], [lo, hi]))
    ci_l2 = tuple(np.quantile(replicates[:, 1], [lo, hi]))
    return BootstrapResult(
        point=(point.r2, point.l2),
        replicates=replicates,
        ci_r2=ci_r2,
        ci_l2=ci_l2,
        level=level,
        seed=seed,
        failures=failures,
    )
