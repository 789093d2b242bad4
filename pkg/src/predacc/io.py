"""File formats: CSV sample ingestion and JSON report serialization.

Censored CSV files carry columns ``time`` and ``status`` (0/1) followed
by covariate columns; complete files carry ``y`` and covariates.  An
optional ``prediction`` column, or a separate single-column file, holds
externally computed predictions.  String covariate columns can be
one-hot encoded on request.  Floats are written with ``repr`` precision,
so a write-then-read round trip reproduces the sample exactly.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np
import pandas as pd

from . import __version__
from .errors import InputError, PredaccError
from .samples import CensoredSample, CompleteSample, PredictionVector

__all__ = [
    "read_censored_csv",
    "read_complete_csv",
    "write_censored_csv",
    "write_complete_csv",
    "read_prediction_column",
    "write_report",
    "read_report",
]

PREDICTION_COLUMN = "prediction"


def _load_frame(path: str) -> pd.DataFrame:
    try:
        # the default fast float parser may be one ulp off; write/read
        # cycles must reproduce doubles exactly
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as err:
        raise InputError(f"{path}: {err}") from err
    if frame.empty:
        raise InputError(f"{path}: no data rows")
    return frame


def _covariates(frame: pd.DataFrame, path: str, one_hot: bool) -> np.ndarray:
    if frame.shape[1] == 0:
        raise InputError(f"{path}: no covariate columns")
    non_numeric = [
        name for name in frame.columns
        if not np.issubdtype(frame[name].dtype, np.number)
    ]
    if non_numeric:
        if not one_hot:
            raise InputError(
                f"{path}: non-numeric covariate column(s) {non_numeric}; "
                "rerun with one-hot encoding enabled"
            )
        frame = pd.get_dummies(frame, columns=non_numeric, dtype=float)
    values = frame.to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        row, col = bad[0]
        raise InputError(
            f"{path}: non-finite covariate at row {row + 2}, column "
            f"{frame.columns[col]!r}"
        )
    return values


def _numeric_column(frame: pd.DataFrame, name: str, path: str) -> np.ndarray:
    values = pd.to_numeric(frame[name], errors="coerce").to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        raise InputError(
            f"{path}: column {name!r} has a missing or non-numeric value at "
            f"row {int(bad[0][0]) + 2}"
        )
    return values


def read_censored_csv(path: str, one_hot: bool = False):
    """Load a censored sample; returns ``(sample, predictions-or-None)``."""
    frame = _load_frame(path)
    for required in ("time", "status"):
        if required not in frame.columns:
            raise InputError(f"{path}: missing required column {required!r}")
    t = _numeric_column(frame, "time", path)
    status = _numeric_column(frame, "status", path)
    bad = np.argwhere(~np.isin(status, (0.0, 1.0)))
    if bad.size:
        raise InputError(
            f"{path}: column 'status' must be 0 or 1, offending row "
            f"{int(bad[0][0]) + 2}"
        )
    predictions = None
    rest = frame.drop(columns=["time", "status"])
    if PREDICTION_COLUMN in rest.columns:
        predictions = PredictionVector(_numeric_column(rest, PREDICTION_COLUMN, path))
        rest = rest.drop(columns=[PREDICTION_COLUMN])
    x = _covariates(rest, path, one_hot)
    try:
        sample = CensoredSample(t=t, delta=status.astype(np.int8), x=x)
    except PredaccError as err:
        raise InputError(f"{path}: {err}") from err
    return sample, predictions


def read_complete_csv(path: str, one_hot: bool = False):
    """Load a complete sample; returns ``(sample, predictions-or-None)``."""
    frame = _load_frame(path)
    if "y" not in frame.columns:
        raise InputError(f"{path}: missing required column 'y'")
    y = _numeric_column(frame, "y", path)
    predictions = None
    rest = frame.drop(columns=["y"])
    if PREDICTION_COLUMN in rest.columns:
        predictions = PredictionVector(_numeric_column(rest, PREDICTION_COLUMN, path))
        rest = rest.drop(columns=[PREDICTION_COLUMN])
    x = _covariates(rest, path, one_hot)
    try:
        sample = CompleteSample(y=y, x=x)
    except PredaccError as err:
        raise InputError(f"{path}: {err}") from err
    return sample, predictions


def read_prediction_column(path: str, n: int) -> PredictionVector:
    """Load external predictions from a single-column CSV (with or without header)."""
    try:
        frame = pd.read_csv(path, header=None, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise InputError(f"{path}: {err}") from err
    if frame.shape[1] != 1:
        raise InputError(f"{path}: prediction file must have exactly one column")
    values = pd.to_numeric(frame[0], errors="coerce").to_numpy(dtype=float)
    if np.isnan(values[0]) and values.size == n + 1:
        values = values[1:]  # tolerate a header line
    if values.size != n:
        raise InputError(f"{path}: {values.size} predictions for {n} rows")
    if not np.all(np.isfinite(values)):
        raise InputError(f"{path}: non-finite prediction value")
    return PredictionVector(values)


def write_censored_csv(path: str, sample: CensoredSample, covariate_names=None) -> None:
    names = covariate_names or [f"x{j + 1}" for j in range(sample.x.shape[1])]
    frame = pd.DataFrame({"time": sample.t, "status": sample.delta.astype(int)})
    for j, name in enumerate(names):
        frame[name] = sample.x[:, j]
    # default float formatting is shortest-repr, which round-trips exactly
    frame.to_csv(path, index=False)


def write_complete_csv(path: str, sample: CompleteSample, covariate_names=None) -> None:
    names = covariate_names or [f"x{j + 1}" for j in range(sample.x.shape[1])]
    frame = pd.DataFrame({"y": sample.y})
    for j, name in enumerate(names):
        frame[name] = sample.x[:, j]
    frame.to_csv(path, index=False)


def write_report(path: str, payload: dict[str, Any]) -> None:
    """Serialize a report document; floats keep full repr precision."""
    document = dict(payload)
    document["tool"] = {"name": "predacc", "version": __version__}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=2, sort_keys=True, allow_nan=True)
        handle.write("\n")


def read_report(path: str) -> dict[str, Any]:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
