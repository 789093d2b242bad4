"""Cox proportional-hazards fitting and prediction.

The partial likelihood uses the Breslow convention for tied event
times: with d_k events and covariate sum s_k at the k-th distinct event
time, and risk set R_k = {j : T_j >= t_k},

    loglik(beta) = sum_k [ s_k' beta - d_k log sum_{j in R_k} exp(beta' x_j) ].

Newton-Raphson with step-halving maximizes it from beta = 0; risk-set
sums are suffix cumulative sums over the time-sorted rows, and the
linear predictor is centered by its maximum before exponentiation so
that large beta' x cannot overflow.

Predictions come from the Breslow baseline cumulative hazard through
S(t | x) = exp(-H0(t) exp(beta' x)): either the restricted conditional
mean, integrating S up to the largest observed event time tau, or the
conditional median, the smallest jump time where S drops to 0.5 or
below (tau when the curve never gets there).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MonotoneLikelihood, NonConvergence, UnconvergedFit
from .samples import CensoredSample, PredictionVector

__all__ = [
    "CoxFit",
    "BreslowBaseline",
    "fit_cox",
    "breslow_baseline",
    "cox_predict",
]

#: convergence tolerance on the score (gradient) norm
SCORE_TOL = 1e-8
MAX_ITER = 50
#: iterates beyond this magnitude are treated as monotone-likelihood divergence
BETA_BOUND = 50.0
_MAX_HALVINGS = 40


@dataclass(frozen=True)
class BreslowBaseline:
    """Step cumulative hazard with increments d_k / sum_{R_k} exp(beta' x)."""

    times: np.ndarray
    increments: np.ndarray

    def __post_init__(self):
        for arr in (self.times, self.increments):
            arr.setflags(write=False)

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.increments)

    def cumhaz(self, t) -> np.ndarray:
        """H0(t), right-continuous."""
        idx = np.searchsorted(self.times, np.asarray(t, dtype=float), side="right")
        padded = np.concatenate(([0.0], self.cumulative))
        return padded[idx]

    def cumhaz_before(self, t) -> np.ndarray:
        """H0(t-): increments strictly before t, for left-limit survival."""
        idx = np.searchsorted(self.times, np.asarray(t, dtype=float), side="left")
        padded = np.concatenate(([0.0], self.cumulative))
        return padded[idx]


@dataclass(frozen=True)
class CoxFit:
    beta: np.ndarray
    baseline: BreslowBaseline
    loglik: float
    converged: bool
    iterations: int

    def __post_init__(self):
        self.beta.setflags(write=False)


class _PartialLikelihood:
    """Breslow log partial likelihood with analytic score and hessian."""

    def __init__(self, sample: CensoredSample):
        order = np.argsort(sample.t, kind="stable")
        self.t = sample.t[order]
        self.delta = sample.delta[order]
        self.x = sample.x[order]
        self.n, self.p = self.x.shape

        times, first = np.unique(self.t, return_index=True)
        d = np.add.reduceat(self.delta.astype(np.int64), first)
        has_event = d > 0
        self.event_times = times[has_event]
        self.d = d[has_event].astype(float)
        # suffix start index of each event-time risk set
        self.risk_start = first[has_event]
        ev = self.delta == 1
        # covariate sum over events at each distinct event time
        s_all = np.zeros((times.size, self.p))
        np.add.at(s_all, np.searchsorted(times, self.t[ev]), self.x[ev])
        self.s = s_all[has_event]

    def _suffix(self, arr: np.ndarray) -> np.ndarray:
        return np.cumsum(arr[::-1], axis=0)[::-1]

    def derivatives(self, beta: np.ndarray):
        """Return (loglik, score, hessian) at beta."""
        eta = self.x @ beta
        c = eta.max() if self.n else 0.0
        r = np.exp(eta - c)

        s0 = self._suffix(r)[self.risk_start]
        s1 = self._suffix(self.x * r[:, None])[self.risk_start]
        s2 = self._suffix(self.x[:, :, None] * self.x[:, None, :] * r[:, None, None])[
            self.risk_start
        ]

        log_denom = c + np.log(s0)
        loglik = float(np.sum(self.s @ beta) - np.sum(self.d * log_denom))
        xbar = s1 / s0[:, None]
        score = np.sum(self.s - self.d[:, None] * xbar, axis=0)
        outer = xbar[:, :, None] * xbar[:, None, :]
        hessian = -np.einsum(
            "k,kij->ij", self.d, s2 / s0[:, None, None] - outer
        )
        return loglik, score, hessian

    def loglik(self, beta: np.ndarray) -> float:
        eta = self.x @ beta
        c = eta.max() if self.n else 0.0
        with np.errstate(over="ignore"):
            r = np.exp(eta - c)
        s0 = self._suffix(r)[self.risk_start]
        return float(np.sum(self.s @ beta) - np.sum(self.d * (c + np.log(s0))))


def fit_cox(sample: CensoredSample) -> CoxFit:
    """Maximize the Breslow partial likelihood by damped Newton-Raphson.

    Starts at beta = 0 and stops when the score norm falls to 1e-8.

    Raises
    ------
    MonotoneLikelihood
        If an iterate leaves the box |beta_j| <= 50, the divergence
        signature of a likelihood with no interior maximum.
    NonConvergence
        If 50 iterations pass without reaching the score tolerance, or a
        Newton step cannot improve the likelihood.
    """
    pl = _PartialLikelihood(sample)
    beta = np.zeros(pl.p)
    ll, score, hessian = pl.derivatives(beta)

    for iteration in range(1, MAX_ITER + 1):
        if np.linalg.norm(score) <= SCORE_TOL:
            return CoxFit(
                beta=beta,
                baseline=breslow_baseline(sample, beta),
                loglik=ll,
                converged=True,
                iterations=iteration - 1,
            )
        try:
            direction = np.linalg.solve(-hessian, score)
        except np.linalg.LinAlgError:
            ridge = 1e-8 * max(1.0, float(np.trace(-hessian)) / pl.p)
            direction = np.linalg.solve(-hessian + ridge * np.eye(pl.p), score)

        # near the optimum the quadratic gain falls below the rounding
        # noise of the log likelihood; the full Newton step is still the
        # right move, so accept it within that noise
        slack = 1e-10 * (1.0 + abs(ll))
        step = 1.0
        for _ in range(_MAX_HALVINGS):
            candidate = beta + step * direction
            cand_ll = pl.loglik(candidate)
            if cand_ll > ll or (step == 1.0 and cand_ll >= ll - slack):
                break
            step *= 0.5
        else:
            raise NonConvergence(
                f"step-halving stalled at iteration {iteration} (score norm "
                f"{np.linalg.norm(score):.3g})"
            )
        beta = beta + step * direction
        if np.max(np.abs(beta)) > BETA_BOUND:
            raise MonotoneLikelihood(
                f"|beta| exceeded {BETA_BOUND:g}; partial likelihood appears monotone"
            )
        ll, score, hessian = pl.derivatives(beta)

    raise NonConvergence(
        f"score norm {np.linalg.norm(score):.3g} after {MAX_ITER} iterations"
    )


def breslow_baseline(sample: CensoredSample, beta: np.ndarray) -> BreslowBaseline:
    """Breslow baseline cumulative-hazard increments at beta."""
    beta = np.asarray(beta, dtype=float)
    pl = _PartialLikelihood(sample)
    eta = pl.x @ beta
    c = eta.max()
    r = np.exp(eta - c)
    s0 = pl._suffix(r)[pl.risk_start]
    increments = pl.d * np.exp(-c - np.log(s0))
    return BreslowBaseline(times=pl.event_times, increments=increments)


def _survival_segments(fit: CoxFit):
    times = fit.baseline.times
    cumhaz = fit.baseline.cumulative
    if times.size == 0:
        raise UnconvergedFit("baseline has no event time; no prediction horizon")
    tau = float(times[-1])
    return times, cumhaz, tau


def cox_predict(fit: CoxFit, x, kind: str = "mean") -> PredictionVector:
    """Predict from a Cox fit at covariate rows ``x``.

    Parameters
    ----------
    fit : CoxFit
    x : (n, p) array_like
    kind : {"mean", "median"}
        ``"mean"``: conditional mean restricted to [0, tau] with tau the
        largest observed event time, the integral of the step survival
        curve.  ``"median"``: smallest baseline jump time with
        S(t | x) <= 0.5; rows whose curve stays above 0.5 fall back to
        tau and are counted in a warning.

    Raises
    ------
    UnconvergedFit
        If the fit did not converge.
    """
    if not fit.converged:
        raise UnconvergedFit("cox fit did not converge; refusing to predict")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    risk = np.exp(x @ fit.beta)
    times, cumhaz, tau = _survival_segments(fit)

    if kind == "median":
        # S(t|x) <= 1/2  <=>  H0(t) >= log 2 / risk
        threshold = np.log(2.0) / risk
        idx = np.searchsorted(cumhaz, threshold, side="left")
        capped = idx >= times.size
        if capped.any():
            warnings.warn(
                f"{int(capped.sum())} median prediction(s) capped at the "
                f"largest event time {tau:g}",
                RuntimeWarning,
                stacklevel=2,
            )
        return PredictionVector(np.where(capped, tau, times[np.minimum(idx, times.size - 1)]))
    if kind != "mean":
        raise ValueError(f"kind must be 'mean' or 'median', got {kind!r}")

    # integrate the step survival over [0, tau]: the leading [0, t_1)
    # segment carries S = 1, the segment starting at t_k carries
    # S = exp(-H0(t_k) * risk); the final width tau - t_m is zero
    edges = np.concatenate((np.clip(times, 0.0, tau), [tau]))
    widths = np.diff(np.concatenate(([0.0], edges)))
    out = np.empty(risk.size)
    chunk = max(1, int(2e6 // max(times.size, 1)))
    for start in range(0, risk.size, chunk):
        r = risk[start : start + chunk, None]
        with np.errstate(over="ignore"):
            surv = np.exp(-cumhaz[None, :] * r)
        surv = np.concatenate((np.ones((r.shape[0], 1)), surv), axis=1)
        out[start : start + chunk] = surv @ widths
    return PredictionVector(out)
