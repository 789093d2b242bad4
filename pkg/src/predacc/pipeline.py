"""Shared fit-predict-weigh-measure pipeline.

The bootstrap, the simulation harness and the CLI all need the same
sequence: fit a named model on a sample, turn the fit into a prediction
vector, build censoring weights, and compute the accuracy report.  Named
models are "ols" (complete data only), "cox", "aft-lognormal" and
"aft-weibull".
"""

from __future__ import annotations

import numpy as np

from .aft import AftFit, fit_aft, aft_predict
from .censoring import ipcw_weights, ipcw_weights_covariate, fit_censoring_cox, uniform_weights
from .cox import CoxFit, fit_cox, cox_predict
from .errors import ConfigError
from .linear import fit_ols
from .measures import AccuracyReport, accuracy_censored, accuracy_complete
from .samples import CensoredSample, CompleteSample, PredictionVector

__all__ = ["MODELS", "fit_and_predict", "compute_weights", "evaluate_sample"]

MODELS = ("ols", "cox", "aft-lognormal", "aft-weibull")
WEIGHT_SCHEMES = ("km", "cox")


def _as_censored(sample: CensoredSample | CompleteSample) -> CensoredSample:
    if isinstance(sample, CensoredSample):
        return sample
    return CensoredSample(t=sample.y, delta=np.ones(sample.n, dtype=np.int8), x=sample.x)


def fit_and_predict(
    sample: CensoredSample | CompleteSample,
    model: str,
    kind: str = "mean",
):
    """Fit a named model and return ``(fit, PredictionVector)``."""
    if model == "ols":
        if isinstance(sample, CensoredSample):
            raise ConfigError("model 'ols' needs complete (uncensored) data")
        fit = fit_ols(sample)
        return fit, fit.fitted
    censored = _as_censored(sample)
    if model == "cox":
        fit = fit_cox(censored)
        return fit, cox_predict(fit, censored.x, kind=kind)
    if model in ("aft-lognormal", "aft-weibull"):
        fit = fit_aft(censored, distribution=model.split("-", 1)[1])
        return fit, aft_predict(fit, censored.x, kind=kind)
    raise ConfigError(f"unknown model {model!r}; choose from {MODELS}")


def compute_weights(sample: CensoredSample, scheme: str = "km"):
    """IPCW weights under the marginal KM ("km") or censoring-Cox ("cox") scheme."""
    if scheme == "km":
        return ipcw_weights(sample)
    if scheme == "cox":
        if not np.any(sample.delta == 0):
            return uniform_weights(sample.n)
        return ipcw_weights_covariate(sample, fit_censoring_cox(sample))
    raise ConfigError(f"unknown weight scheme {scheme!r}; choose from {WEIGHT_SCHEMES}")


def evaluate_sample(
    sample: CensoredSample | CompleteSample,
    model: str,
    kind: str = "mean",
    weights: str = "km",
    predictions: PredictionVector | None = None,
) -> AccuracyReport:
    """Run the full pipeline on one sample and return its accuracy report.

    ``predictions`` bypasses model fitting (externally supplied
    prediction vector aligned with the sample rows).
    """
    if predictions is None:
        _, predictions = fit_and_predict(sample, model, kind)
    if isinstance(sample, CompleteSample):
        return accuracy_complete(sample, predictions)
    return accuracy_censored(sample, predictions, compute_weights(sample, weights))
