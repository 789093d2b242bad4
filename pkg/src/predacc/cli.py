"""Command-line interface: evaluate, simulate, population.

Exit codes: 0 success, 2 input error, 3 numerical failure, 4
configuration error.  Every command records the seed it ran with, and a
re-run with the same seed produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .bootstrap import DEFAULT_LEVEL, DEFAULT_REPLICATES, bootstrap_accuracy
from .errors import (
    ConfigError,
    InputError,
    NumericalError,
    PredaccError,
    ValidationError,
)
from .io import (
    read_censored_csv,
    read_complete_csv,
    read_prediction_column,
    write_report,
)
from .measures import AccuracyReport
from .pipeline import MODELS, WEIGHT_SCHEMES, evaluate_sample, fit_and_predict
from .samples import CensoredSample, PredictionVector
from .simulation import approx_population, run_scenario
from .simulation import AftWeibullDesign, CoxWeibullDesign

EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_CONFIG = 4


def _fresh_seed() -> int:
    return secrets.randbits(32)


def _report_dict(report: AccuracyReport) -> dict:
    out = {
        "r2": report.r2,
        "l2": report.l2,
        "total_ss": report.total_ss,
        "explained_ss": report.explained_ss,
        "residual_ss": report.residual_ss,
        "mspe": report.mspe,
        "correction_gap_ss": report.correction_gap_ss,
        "weighted_mean": report.weighted_mean,
        "n": report.n,
        "censoring_rate": report.censoring_rate,
        "corrected_predictor": {
            "intercept": report.corrected.intercept,
            "slope": report.corrected.slope,
            "weighted": report.corrected.weighted,
            "degenerate": report.corrected.degenerate,
        },
    }
    return out


def _fit_summary(fit) -> dict:
    if fit is None:
        return {"model": "external"}
    summary = {"model": type(fit).__name__}
    for name in ("intercept", "scale", "distribution", "loglik", "converged", "iterations"):
        if hasattr(fit, name):
            summary[name] = getattr(fit, name)
    if hasattr(fit, "beta"):
        summary["coefficients"] = list(np.asarray(fit.beta, dtype=float))
    elif hasattr(fit, "coef"):
        summary["coefficients"] = list(np.asarray(fit.coef, dtype=float))
    return summary


def cmd_evaluate(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _fresh_seed()
    if args.data == "censored":
        sample, inline_predictions = read_censored_csv(args.input, one_hot=args.one_hot)
        if np.any(sample.t <= 0):
            print(
                f"warning: {int(np.sum(sample.t <= 0))} nonpositive time(s) in "
                f"{args.input}",
                file=sys.stderr,
            )
    else:
        sample, inline_predictions = read_complete_csv(args.input, one_hot=args.one_hot)

    predictions = inline_predictions
    if args.predictions is not None:
        predictions = read_prediction_column(args.predictions, sample.n)
    if args.model == "external":
        if predictions is None:
            raise InputError(
                "model 'external' needs a prediction column or --predictions file"
            )
        fit = None
    else:
        if predictions is not None:
            raise ConfigError(
                "both a fitted model and external predictions were requested; "
                "use --model external for supplied predictions"
            )
        fit, predictions = fit_and_predict(sample, args.model, kind=args.predict)

    report = evaluate_sample(
        sample,
        args.model,
        kind=args.predict,
        weights=args.weights,
        predictions=predictions,
    )

    payload = {
        "command": "evaluate",
        "input": args.input,
        "data": args.data,
        "model": args.model,
        "predict": args.predict,
        "weights": args.weights if isinstance(sample, CensoredSample) else None,
        "seed": seed,
        "report": _report_dict(report),
        "fit": _fit_summary(fit),
    }
    if args.bootstrap:
        if args.model == "external":
            fixed = predictions

            def replicate(s, rows):
                return evaluate_sample(
                    s, args.model, weights=args.weights,
                    predictions=PredictionVector(fixed.m[rows]),
                )
        else:

            def replicate(s, rows):
                return evaluate_sample(
                    s, args.model, kind=args.predict, weights=args.weights
                )

        result = bootstrap_accuracy(
            sample, replicate, b=args.bootstrap, level=args.level, seed=seed
        )
        payload["bootstrap"] = {
            "replicates": args.bootstrap,
            "kept": int(result.replicates.shape[0]),
            "failures": result.failures,
            "level": result.level,
            "ci_r2": list(result.ci_r2),
            "ci_l2": list(result.ci_l2),
        }
    if args.out:
        write_report(args.out, payload)
    else:
        json.dump(payload | {"tool": {"name": "predacc", "version": __version__}},
                  sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        with open(args.config, encoding="utf-8") as handle:
            config = json.load(handle)
    except OSError as err:
        raise InputError(f"{args.config}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"{args.config}: invalid JSON ({err})") from err
    if args.seed is not None:
        config["seed"] = args.seed
    elif "seed" not in config:
        config["seed"] = _fresh_seed()
    result = run_scenario(config)

    lines = ["censoring_rate,n,model,measure,mean,sd,replications,failures"]
    names = {"r2": ("mean_r2", "sd_r2"), "l2": ("mean_l2", "sd_l2"),
             "rho2": ("mean_r2", "sd_r2"), "lambda2": ("mean_l2", "sd_l2")}
    for cell in result.cells:
        for measure in result.measures:
            mean_field, sd_field = names[measure]
            lines.append(
                f"{cell.censoring_rate:g},{cell.n},{cell.model},{measure},"
                f"{getattr(cell, mean_field):.4g},{getattr(cell, sd_field):.4g},"
                f"{cell.replications},{cell.failures}"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {len(result.cells)} cell(s) to {args.out} (seed {result.seed})")
    else:
        sys.stdout.write(text)
    return 0


def cmd_population(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _fresh_seed()
    if args.design == "cox-weibull":
        if args.nu is None:
            raise ConfigError("--nu is required for the cox-weibull design")
        design = CoxWeibullDesign(beta=args.beta, nu=args.nu, n=args.n)
    else:
        design = AftWeibullDesign(beta=args.beta, sigma=args.sigma, n=args.n)
    estimate = approx_population(
        design, args.model, kind=args.predict, mc_reps=args.reps, mc_n=args.n,
        seed=seed,
    )
    payload = {
        "command": "population",
        "design": args.design,
        "model": args.model,
        "predict": args.predict,
        "seed": seed,
        "estimate": asdict(estimate),
    }
    print(
        f"rho2 = {estimate.rho2:.4f} (se {estimate.rho2_se:.4f})   "
        f"lambda2 = {estimate.lambda2:.4f} (se {estimate.lambda2_se:.4f})   "
        f"[{estimate.mc_reps} reps x n={estimate.mc_n}, {estimate.failures} failed]"
    )
    if args.out:
        write_report(args.out, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predacc",
        description="Paired R2/L2 prediction accuracy measures for complete "
        "and right-censored data",
    )
    parser.add_argument("--version", action="version", version=f"predacc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="measure prediction accuracy on a CSV sample")
    ev.add_argument("--input", required=True, help="sample CSV")
    ev.add_argument("--data", choices=("censored", "complete"), default="censored")
    ev.add_argument("--model", choices=MODELS + ("external",), default="cox")
    ev.add_argument("--predict", choices=("mean", "median"), default="mean")
    ev.add_argument("--weights", choices=WEIGHT_SCHEMES, default="km")
    ev.add_argument("--predictions", help="single-column CSV of external predictions")
    ev.add_argument("--one-hot", action="store_true",
                    help="one-hot encode string covariate columns")
    ev.add_argument("--bootstrap", type=int, default=0, metavar="B",
                    help=f"bootstrap replicates (suggested {DEFAULT_REPLICATES})")
    ev.add_argument("--level", type=float, default=DEFAULT_LEVEL)
    ev.add_argument("--seed", type=int)
    ev.add_argument("--out", help="write the JSON report here")
    ev.set_defaults(func=cmd_evaluate)

    sim = sub.add_parser("simulate", help="replicate a scenario table from a JSON config")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, help="override the seed in the config")
    sim.add_argument("--out", help="write the table CSV here")
    sim.set_defaults(func=cmd_simulate)

    pop = sub.add_parser("population", help="Monte Carlo population rho2/lambda2")
    pop.add_argument("--design", choices=("cox-weibull", "aft-weibull"), required=True)
    pop.add_argument("--beta", type=float, default=1.0)
    pop.add_argument("--nu", type=float, help="cox-weibull shape")
    pop.add_argument("--sigma", type=float, default=0.15, help="aft-weibull scale")
    pop.add_argument("--model", choices=MODELS, default="cox")
    pop.add_argument("--predict", choices=("mean", "median"), default="mean")
    pop.add_argument("--reps", type=int, default=100)
    pop.add_argument("--n", type=int, default=5000)
    pop.add_argument("--seed", type=int)
    pop.add_argument("--out", help="write the JSON report here")
    pop.set_defaults(func=cmd_population)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValidationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except PredaccError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
