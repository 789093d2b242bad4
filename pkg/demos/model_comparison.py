"""Comparing unnested survival models with the paired measures.

The two measures need no shared baseline hazard or nesting structure, so
a proportional hazards fit and two accelerated failure time fits can be
ranked on the same censored sample.
"""

import numpy as np

from predacc import CensoredSample
from predacc.pipeline import MODELS, evaluate_sample
from predacc.simulation import AftWeibullDesign, IndependentCensoring, calibrate_censoring, gen_aft_weibull

rng = np.random.default_rng(20240903)

# data follow a Weibull AFT model; the lognormal AFT model is therefore
# mis-specified and the hazard model holds only approximately
design = calibrate_censoring(
    AftWeibullDesign(n=800, censoring=IndependentCensoring(scale=1.0)),
    target_rate=0.25,
    seed=11,
)
sample = gen_aft_weibull(design, rng)
print(f"one sample of n = {sample.n}, {1 - sample.delta.mean():.1%} censored\n")

print(f"{'model':<15s} {'kind':<7s} {'R2':>7s} {'L2':>7s}")
for model in MODELS:
    if model == "ols":
        continue  # needs complete data
    for kind in ("mean", "median"):
        report = evaluate_sample(sample, model, kind=kind)
        print(f"{model:<15s} {kind:<7s} {report.r2:7.3f} {report.l2:7.3f}")

print()
print("all three models rank subjects almost equally well (R2), but the")
print("mis-specified lognormal median and the hazard-model median pay a")
print("visible L2 penalty: their raw predictions sit on the wrong scale")
print("and lean on the affine correction")
