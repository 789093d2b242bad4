"""Simulation designs, censoring calibration and table replication.

Two generating families are supported.  The Cox-Weibull family draws a
dichotomous covariate x = 10 * Bernoulli(0.5) and inverts the Weibull
baseline H0^{-1}(t) = 2 t^{1/nu}:

    Y = 2 * (-log U * exp(-beta x))^(1/nu),        U ~ Uniform(0, 1).

The AFT-Weibull family draws x ~ Uniform(0, 1) and sets
log Y = beta x + sigma W with W = log(-log(1 - U)), the standard
minimum-extreme-value variate, so Y = exp(beta x) * E^sigma with E
standard exponential.  Censoring is either absent, independent
(C ~ Weibull(shape 1, scale b), i.e. exponential with scale b) or
covariate-dependent (log C = gamma_c x + theta_c V with V drawn by the
same extreme-value convention as W).

Free censoring parameters are calibrated by bisection against a fixed
set of common random numbers until the Monte Carlo censoring rate over
20000 draws sits within +-0.005 of the target.

Every replicate draws from an RNG stream keyed by (seed, cell, rep), so
scenario tables are reproducible from the seed alone and do not depend
on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import CalibrationFailure, ConfigError, PredaccError
from .pipeline import evaluate_sample
from .samples import CensoredSample

__all__ = [
    "IndependentCensoring",
    "DependentCensoring",
    "CoxWeibullDesign",
    "AftWeibullDesign",
    "PopulationEstimate",
    "CellResult",
    "ScenarioResult",
    "gen_cox_weibull",
    "gen_aft_weibull",
    "calibrate_censoring",
    "approx_population",
    "run_scenario",
]

CALIBRATION_DRAWS = 20000
CALIBRATION_TOL = 5e-3
CALIBRATION_MAX_STEPS = 60
DEFAULT_MC_REPS = 100
DEFAULT_MC_N = 5000


@dataclass(frozen=True)
class IndependentCensoring:
    """C ~ Weibull(shape=1, scale=scale), independent of everything."""

    scale: float = 1.0


@dataclass(frozen=True)
class DependentCensoring:
    """log C = gamma_c * x + theta_c * V with V standard minimum extreme value."""

    gamma_c: float = 0.0
    theta_c: float = 4.0


Censoring = IndependentCensoring | DependentCensoring | None


@dataclass(frozen=True)
class CoxWeibullDesign:
    """Proportional-hazards generator with dichotomous covariate, no censoring."""

    beta: float
    nu: float
    n: int

    def label(self) -> str:
        return f"beta={self.beta:g},nu={self.nu:g}"


@dataclass(frozen=True)
class AftWeibullDesign:
    """Weibull AFT generator log Y = beta x + sigma W, x ~ Uniform(0, 1)."""

    beta: float = 1.0
    sigma: float = 0.15
    n: int = 100
    censoring: Censoring = None

    def label(self) -> str:
        return f"beta={self.beta:g},sigma={self.sigma:g}"


def _std_exponential(rng: np.random.Generator, n: int) -> np.ndarray:
    # -log(1 - U) keeps the inverse-CDF form stated by the designs
    return -np.log1p(-rng.random(n))


def gen_cox_weibull(design: CoxWeibullDesign, rng: np.random.Generator) -> CensoredSample:
    """Draw one uncensored sample from the Cox-Weibull design."""
    x = 10.0 * rng.integers(0, 2, design.n).astype(float)
    e = _std_exponential(rng, design.n)
    y = 2.0 * (e * np.exp(-design.beta * x)) ** (1.0 / design.nu)
    return CensoredSample(t=y, delta=np.ones(design.n, dtype=np.int8), x=x[:, None])


def _aft_event_times(design: AftWeibullDesign, rng: np.random.Generator):
    x = rng.random(design.n)
    w = np.log(_std_exponential(rng, design.n))
    y = np.exp(design.beta * x + design.sigma * w)
    return x, y


def gen_aft_weibull(design: AftWeibullDesign, rng: np.random.Generator) -> CensoredSample:
    """Draw one sample from the AFT-Weibull design, censoring it as configured."""
    x, y = _aft_event_times(design, rng)
    spec = design.censoring
    if spec is None:
        return CensoredSample(t=y, delta=np.ones(design.n, dtype=np.int8), x=x[:, None])
    if isinstance(spec, IndependentCensoring):
        c = spec.scale * _std_exponential(rng, design.n)
    elif isinstance(spec, DependentCensoring):
        v = np.log(_std_exponential(rng, design.n))
        c = np.exp(spec.gamma_c * x + spec.theta_c * v)
    else:
        raise ConfigError(f"unknown censoring spec {spec!r}")
    t = np.minimum(y, c)
    delta = (y <= c).astype(np.int8)
    return CensoredSample(t=t, delta=delta, x=x[:, None])


def calibrate_censoring(
    design: AftWeibullDesign,
    target_rate: float,
    seed: int = 0,
) -> AftWeibullDesign:
    """Tune the free censoring parameter to hit a target censoring rate.

    Bisection on the scale b (independent) or the coefficient gamma_c
    (dependent) against one fixed calibration sample of 20000 draws,
    until the Monte Carlo censoring rate is within +-0.005 of target.

    Raises
    ------
    CalibrationFailure
        If no bracket exists or 60 bisection steps do not reach the
        tolerance.
    """
    if not 0.0 <= target_rate < 1.0:
        raise ConfigError(f"target censoring rate must be in [0, 1), got {target_rate}")
    if target_rate == 0.0:
        return replace(design, censoring=None)
    spec = design.censoring
    if spec is None:
        raise ConfigError("design has no censoring mechanism to calibrate")

    rng = np.random.default_rng([seed, 777])
    cal = replace(design, n=CALIBRATION_DRAWS)
    x, y = _aft_event_times(cal, rng)

    if isinstance(spec, IndependentCensoring):
        e = _std_exponential(rng, CALIBRATION_DRAWS)

        def rate(param: float) -> float:
            # param is log b; censored when C = b*e < y
            return float(np.mean(math.exp(param) * e < y))

        make = lambda param: replace(design, censoring=IndependentCensoring(scale=math.exp(param)))
    elif isinstance(spec, DependentCensoring):
        v = np.log(_std_exponential(rng, CALIBRATION_DRAWS))
        base = spec.theta_c * v

        def rate(param: float) -> float:
            return float(np.mean(np.exp(param * x + base) < y))

        make = lambda param: replace(
            design, censoring=DependentCensoring(gamma_c=param, theta_c=spec.theta_c)
        )
    else:
        raise ConfigError(f"unknown censoring spec {spec!r}")

    # rate() is nonincreasing in the parameter under common random numbers
    lo, hi = -1.0, 1.0
    for _ in range(60):
        if rate(lo) >= target_rate:
            break
        lo *= 2.0
    else:
        raise CalibrationFailure("no lower bracket for censoring calibration")
    for _ in range(60):
        if rate(hi) <= target_rate:
            break
        hi *= 2.0
    else:
        raise CalibrationFailure("no upper bracket for censoring calibration")

    for _ in range(CALIBRATION_MAX_STEPS):
        mid = 0.5 * (lo + hi)
        r = rate(mid)
        if abs(r - target_rate) <= CALIBRATION_TOL:
            return make(mid)
        if r > target_rate:
            lo = mid
        else:
            hi = mid
    raise CalibrationFailure(
        f"censoring rate {r:.4f} not within {CALIBRATION_TOL} of {target_rate} "
        f"after {CALIBRATION_MAX_STEPS} bisection steps"
    )


@dataclass(frozen=True)
class PopulationEstimate:
    """Monte Carlo approximation of the population (rho^2, lambda^2)."""

    rho2: float
    lambda2: float
    rho2_se: float
    lambda2_se: float
    mc_reps: int
    mc_n: int
    failures: int = 0


def _strip_censoring(design):
    if isinstance(design, AftWeibullDesign):
        return replace(design, censoring=None)
    return design


def approx_population(
    design: CoxWeibullDesign | AftWeibullDesign,
    model: str,
    kind: str = "mean",
    mc_reps: int = DEFAULT_MC_REPS,
    mc_n: int = DEFAULT_MC_N,
    seed: int = 0,
) -> PopulationEstimate:
    """Average sample measures over uncensored Monte Carlo replicates.

    Each replicate draws n = ``mc_n`` rows with censoring switched off,
    fits ``model``, predicts with ``kind`` and computes (R^2, L^2); the
    averages approximate the population (rho^2, lambda^2) and the
    attached standard errors are the MC standard deviations / sqrt(reps).
    Replicates whose fit fails are dropped and counted.
    """
    base = replace(_strip_censoring(design), n=mc_n)

    r2s, l2s = [], []
    failures = 0
    for rep in range(mc_reps):
        rng = np.random.default_rng([seed, rep])
        if isinstance(base, AftWeibullDesign):
            sample = gen_aft_weibull(base, rng)
        else:
            sample = gen_cox_weibull(base, rng)
        try:
            report = evaluate_sample(sample, model, kind=kind)
        except PredaccError:
            failures += 1
            continue
        r2s.append(report.r2)
        l2s.append(report.l2)

    if not r2s:
        raise CalibrationFailure("every population replicate failed to fit")
    r2s = np.asarray(r2s)
    l2s = np.asarray(l2s)
    k = r2s.size
    return PopulationEstimate(
        rho2=float(r2s.mean()),
        lambda2=float(l2s.mean()),
        rho2_se=float(r2s.std(ddof=1) / math.sqrt(k)) if k > 1 else float("nan"),
        lambda2_se=float(l2s.std(ddof=1) / math.sqrt(k)) if k > 1 else float("nan"),
        mc_reps=mc_reps,
        mc_n=mc_n,
        failures=failures,
    )


@dataclass(frozen=True)
class CellResult:
    """Summaries of one (design, censoring rate, n, model) table cell."""

    model: str
    n: int
    censoring_rate: float
    achieved_rate: float
    replications: int
    failures: int
    mean_r2: float
    sd_r2: float
    mean_l2: float
    sd_l2: float


@dataclass(frozen=True)
class ScenarioResult:
    """All cells of one scenario run plus the seed that produced them."""

    cells: tuple[CellResult, ...]
    seed: int
    population: bool = False
    measures: tuple[str, ...] = ("r2", "l2")


def _design_variants(config: dict):
    design = config.get("design")
    if not isinstance(design, dict) or "kind" not in design:
        raise ConfigError("config needs a design object with a 'kind'")
    kind = design["kind"]
    if kind == "cox-weibull":
        variants = design.get("variants")
        if variants is None:
            variants = [{"beta": design["beta"], "nu": design["nu"]}]
        out = []
        for v in variants:
            try:
                out.append(CoxWeibullDesign(beta=float(v["beta"]), nu=float(v["nu"]), n=2))
            except KeyError as err:
                raise ConfigError(f"cox-weibull variant missing key {err}") from err
        return out
    if kind == "aft-weibull":
        return [
            AftWeibullDesign(
                beta=float(design.get("beta", 1.0)),
                sigma=float(design.get("sigma", 0.15)),
                n=2,
            )
        ]
    raise ConfigError(f"unknown design kind {kind!r}")


def _censoring_template(config: dict):
    spec = config.get("censoring", {"kind": "none"})
    kind = spec.get("kind", "none")
    rates = [float(r) for r in spec.get("rates", [0.0])]
    if kind == "none":
        return None, [0.0]
    if kind == "independent":
        return IndependentCensoring(scale=1.0), rates
    if kind == "dependent":
        return DependentCensoring(gamma_c=0.0, theta_c=float(spec.get("theta_c", 4.0))), rates
    raise ConfigError(f"unknown censoring kind {kind!r}")


def run_scenario(config: dict, seed: int | None = None) -> ScenarioResult:
    """Replicate every cell of a scenario configuration.

    Required keys: design, censoring {kind, rates}, sample_sizes, models,
    replications, seed.  Optional: "population" (true switches each cell
    to the uncensored population approximation, with "replications" as
    the MC replicate count), "measures" (subset of emitted measures) and
    "predict" ("mean" or "median").

    A cell is one (design variant, censoring rate, sample size, model)
    combination; per-replicate RNG streams are keyed (seed, cell, rep).
    """
    for key in ("design", "sample_sizes", "models", "replications"):
        if key not in config:
            raise ConfigError(f"config is missing required key {key!r}")
    if seed is None:
        seed = int(config.get("seed", 0))
    variants = _design_variants(config)
    template, rates = _censoring_template(config)
    sizes = [int(n) for n in config["sample_sizes"]]
    models = list(config["models"])
    reps = int(config["replications"])
    kind = config.get("predict", "mean")
    population = bool(config.get("population", False))
    measures = tuple(config.get("measures", ("r2", "l2")))

    cells = []
    cell_index = 0
    for variant in variants:
        label_suffix = f"({variant.label()})" if len(variants) > 1 else ""
        for rate in rates:
            if isinstance(variant, AftWeibullDesign):
                base = replace(variant, censoring=template)
                calibrated = calibrate_censoring(base, rate, seed=seed) if rate > 0 else replace(
                    base, censoring=None
                )
            else:
                if rate > 0:
                    raise ConfigError("cox-weibull designs are uncensored")
                calibrated = variant
            for n in sizes:
                for model in models:
                    cell_index += 1
                    if population:
                        est = approx_population(
                            calibrated,
                            model,
                            kind=kind,
                            mc_reps=reps,
                            mc_n=n,
                            seed=seed * 1000003 + cell_index,
                        )
                        cells.append(
                            CellResult(
                                model=model + label_suffix,
                                n=n,
                                censoring_rate=rate,
                                achieved_rate=0.0,
                                replications=reps,
                                failures=est.failures,
                                mean_r2=est.rho2,
                                sd_r2=est.rho2_se,
                                mean_l2=est.lambda2,
                                sd_l2=est.lambda2_se,
                            )
                        )
                        continue
                    cells.append(
                        _run_cell(
                            calibrated, model, n, rate, reps, kind, seed, cell_index,
                            label_suffix,
                        )
                    )
    return ScenarioResult(
        cells=tuple(cells), seed=seed, population=population, measures=measures
    )


def _run_cell(design, model, n, rate, reps, kind, seed, cell_index, label_suffix):
    sized = replace(design, n=n)
    r2s, l2s, observed = [], [], []
    failures = 0
    for rep in range(reps):
        rng = np.random.default_rng([seed, cell_index, rep])
        if isinstance(sized, AftWeibullDesign):
            sample = gen_aft_weibull(sized, rng)
        else:
            sample = gen_cox_weibull(sized, rng)
        try:
            report = evaluate_sample(sample, model, kind=kind)
        except PredaccError:
            failures += 1
            continue
        r2s.append(report.r2)
        l2s.append(report.l2)
        observed.append(report.censoring_rate)

    r2s = np.asarray(r2s)
    l2s = np.asarray(l2s)
    return CellResult(
        model=model + label_suffix,
        n=n,
        censoring_rate=rate,
        achieved_rate=float(np.mean(observed)) if observed else float("nan"),
        replications=reps,
        failures=failures,
        mean_r2=float(r2s.mean()) if r2s.size else float("nan"),
        sd_r2=float(r2s.std(ddof=1)) if r2s.size > 1 else float("nan"),
        mean_l2=float(l2s.mean()) if l2s.size else float("nan"),
        sd_l2=float(l2s.std(ddof=1)) if l2s.size > 1 else float("nan"),
    )
