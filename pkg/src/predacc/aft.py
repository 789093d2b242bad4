"""Parametric accelerated-failure-time models under right censoring.

The model is log T = a + b' x + sigma * Z with Z standard normal
(lognormal) or standard minimum-extreme-value (weibull).  The censored
log likelihood on the log-time scale,

    sum_i delta_i [ log f_Z(z_i) - log sigma ] + (1 - delta_i) log S_Z(z_i),
    z_i = (log t_i - a - b' x_i) / sigma,

is maximized over (a, b, log sigma) by Newton ascent with step-halving
and analytic gradient and hessian.  Lognormal censored terms go through
the scaled complementary error function so the normal hazard stays
accurate far into the tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DegenerateScale, NonConvergence, UnconvergedFit
from .samples import CensoredSample, PredictionVector

__all__ = ["AftFit", "fit_aft", "aft_predict"]

GRADIENT_TOL = 1e-8
MAX_ITER = 100
_MAX_HALVINGS = 40
_MIN_LOG_SCALE = math.log(1e-10)

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class AftFit:
    intercept: float
    beta: np.ndarray
    scale: float
    distribution: str
    loglik: float
    converged: bool

    def __post_init__(self):
        self.beta.setflags(write=False)

    def linear_predictor(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.intercept + x @ self.beta


def _normal_terms(z: np.ndarray, event: np.ndarray):
    """Log-density/log-survival values and first two z-derivatives."""
    value = np.empty_like(z)
    d1 = np.empty_like(z)
    d2 = np.empty_like(z)
    ze = z[event]
    value[event] = -0.5 * ze**2 - math.log(_SQRT_2PI)
    d1[event] = -ze
    d2[event] = -1.0
    zc = z[~event]
    value[~event] = special.log_ndtr(-zc)
    hazard = math.sqrt(2.0 / math.pi) / special.erfcx(zc / math.sqrt(2.0))
    d1[~event] = -hazard
    d2[~event] = -hazard * (hazard - zc)
    return value, d1, d2


def _gumbel_terms(z: np.ndarray, event: np.ndarray):
    with np.errstate(over="ignore"):
        ez = np.exp(z)
    value = np.where(event, z - ez, -ez)
    d1 = np.where(event, 1.0 - ez, -ez)
    d2 = -ez
    return value, d1, d2


_TERMS = {"lognormal": _normal_terms, "weibull": _gumbel_terms}


class _CensoredLikelihood:
    def __init__(self, sample: CensoredSample, distribution: str):
        if distribution not in _TERMS:
            raise ValueError(
                f"distribution must be one of {sorted(_TERMS)}, got {distribution!r}"
            )
        if np.any(sample.t <= 0):
            raise ValueError("AFT models need strictly positive times")
        self.logt = np.log(sample.t)
        self.event = sample.delta == 1
        self.x = sample.x
        self.n, self.p = self.x.shape
        self.terms = _TERMS[distribution]

    def _z(self, params: np.ndarray):
        mu = params[0] + self.x @ params[1 : 1 + self.p]
        phi = params[-1]
        sigma = math.exp(phi)
        return (self.logt - mu) / sigma, sigma

    def loglik(self, params: np.ndarray) -> float:
        z, sigma = self._z(params)
        value, _, _ = self.terms(z, self.event)
        return float(np.sum(value) - self.event.sum() * math.log(sigma))

    def derivatives(self, params: np.ndarray):
        z, sigma = self._z(params)
        value, d1, d2 = self.terms(z, self.event)
        loglik = float(np.sum(value) - self.event.sum() * math.log(sigma))

        g_mu = -d1 / sigma
        g_phi = -d1 * z - self.event.astype(float)
        u = np.column_stack([np.ones(self.n), self.x])
        grad = np.concatenate([u.T @ g_mu, [g_phi.sum()]])

        h_mm = d2 / sigma**2
        h_mp = (d2 * z + d1) / sigma
        h_pp = d2 * z**2 + d1 * z
        k = self.p + 2
        hessian = np.empty((k, k))
        hessian[:-1, :-1] = u.T @ (u * h_mm[:, None])
        hessian[:-1, -1] = u.T @ h_mp
        hessian[-1, :-1] = hessian[:-1, -1]
        hessian[-1, -1] = h_pp.sum()
        return loglik, grad, hessian


def fit_aft(sample: CensoredSample, distribution: str = "lognormal") -> AftFit:
    """Censored maximum likelihood for a lognormal or weibull AFT model.

    Starts from the intercept-only moments of log t (all rows) and stops
    when the gradient norm in (a, b, log sigma) falls to 1e-8.

    Raises
    ------
    DegenerateScale
        If the scale estimate collapses (all log-times equal, or the
        iterates drive sigma below 1e-10).
    NonConvergence
        If 100 iterations pass without meeting the gradient tolerance.
    """
    lik = _CensoredLikelihood(sample, distribution)
    spread = float(np.std(lik.logt))
    if spread == 0.0:
        raise DegenerateScale("all log-times equal; scale MLE is zero")

    params = np.zeros(lik.p + 2)
    params[0] = float(np.mean(lik.logt))
    params[-1] = math.log(spread)
    ll, grad, hessian = lik.derivatives(params)

    for iteration in range(1, MAX_ITER + 1):
        if np.linalg.norm(grad) <= GRADIENT_TOL:
            return AftFit(
                intercept=float(params[0]),
                beta=params[1 : 1 + lik.p].copy(),
                scale=float(math.exp(params[-1])),
                distribution=distribution,
                loglik=ll,
                converged=True,
            )
        direction = _ascent_direction(hessian, grad)
        # full Newton steps whose gain is below the loglik rounding noise
        # are accepted; damped steps must improve strictly
        slack = 1e-10 * (1.0 + abs(ll))
        step = 1.0
        for _ in range(_MAX_HALVINGS):
            candidate = params + step * direction
            cand_ll = lik.loglik(candidate) if candidate[-1] > _MIN_LOG_SCALE else -np.inf
            if np.isfinite(cand_ll) and (
                cand_ll > ll or (step == 1.0 and cand_ll >= ll - slack)
            ):
                break
            step *= 0.5
        else:
            raise NonConvergence(
                f"step-halving stalled at iteration {iteration} (gradient norm "
                f"{np.linalg.norm(grad):.3g})"
            )
        params = params + step * direction
        if params[-1] <= _MIN_LOG_SCALE:
            raise DegenerateScale("scale collapsed below 1e-10")
        ll, grad, hessian = lik.derivatives(params)

    raise NonConvergence(
        f"gradient norm {np.linalg.norm(grad):.3g} after {MAX_ITER} iterations"
    )


def _ascent_direction(hessian: np.ndarray, grad: np.ndarray) -> np.ndarray:
    try:
        direction = np.linalg.solve(-hessian, grad)
        if float(grad @ direction) > 0:
            return direction
    except np.linalg.LinAlgError:
        pass
    # hessian not usable (indefinite or singular): ridge it towards gradient ascent
    k = grad.size
    ridge = max(1.0, float(np.abs(hessian).max()))
    for _ in range(30):
        try:
            direction = np.linalg.solve(-hessian + ridge * np.eye(k), grad)
            if float(grad @ direction) > 0:
                return direction
        except np.linalg.LinAlgError:
            pass
        ridge *= 10.0
    return grad / max(1.0, float(np.linalg.norm(grad)))


def aft_predict(fit: AftFit, x, kind: str = "mean") -> PredictionVector:
    """Closed-form conditional mean or median on the original time scale.

    With eta = a + b' x: lognormal mean exp(eta + sigma^2 / 2), median
    exp(eta); weibull mean exp(eta) * Gamma(1 + sigma), median
    exp(eta) * (log 2)^sigma.
    """
    if not fit.converged:
        raise UnconvergedFit("aft fit did not converge; refusing to predict")
    eta = fit.linear_predictor(x)
    if kind == "mean":
        if fit.distribution == "lognormal":
            return PredictionVector(np.exp(eta + 0.5 * fit.scale**2))
        return PredictionVector(np.exp(eta) * math.gamma(1.0 + fit.scale))
    if kind == "median":
        if fit.distribution == "lognormal":
            return PredictionVector(np.exp(eta))
        return PredictionVector(np.exp(eta) * math.log(2.0) ** fit.scale)
    raise ValueError(f"kind must be 'mean' or 'median', got {kind!r}")
