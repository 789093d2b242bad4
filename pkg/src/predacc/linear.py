"""Ordinary least squares as a prediction-function supplier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient
from .samples import CompleteSample, PredictionVector

__all__ = ["OlsFit", "fit_ols"]


@dataclass(frozen=True)
class OlsFit:
    """Intercept, coefficients and in-sample fitted values."""

    intercept: float
    coef: np.ndarray
    fitted: PredictionVector

    def predict(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.intercept + x @ self.coef


def fit_ols(sample: CompleteSample) -> OlsFit:
    """Least-squares regression of the response on the covariates.

    Raises
    ------
    RankDeficient
        If the design matrix (intercept column included) does not have
        full column rank.
    """
    n, p = sample.x.shape
    design = np.column_stack([np.ones(n), sample.x])
    coef, _, rank, _ = np.linalg.lstsq(design, sample.y, rcond=None)
    if rank < p + 1:
        raise RankDeficient(f"design matrix rank {rank} < {p + 1}")
    fitted = design @ coef
    return OlsFit(
        intercept=float(coef[0]),
        coef=coef[1:],
        fitted=PredictionVector(fitted),
    )
