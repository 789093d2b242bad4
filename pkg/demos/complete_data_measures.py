"""Why one number is not enough: R2 and L2 on complete data.

A nonlinear prediction function can rank subjects almost perfectly and
still be far off in absolute terms.  R2 alone cannot tell these two
situations apart; the paired L2 measure can.
"""

import numpy as np

from predacc import (
    CompleteSample,
    PredictionVector,
    accuracy_complete,
    fit_ols,
)

rng = np.random.default_rng(20240901)

n = 400
x = rng.uniform(0.0, 2.0, n)
y = np.exp(x) + 0.6 * rng.normal(size=n)
sample = CompleteSample(y=y, x=x)

print("=== least squares baseline ===")
ols = fit_ols(sample)
rep = accuracy_complete(sample, ols.fitted)
print(f"linear fit:      R2 = {rep.r2:.3f}   L2 = {rep.l2:.3f}")
print("fitted values are their own best affine transform, so L2 is 1\n")

print("=== a biased but well-correlated prediction ===")
# same exponential shape, but scaled down and shifted: ranks are intact,
# levels are wrong
biased = PredictionVector(0.4 * np.exp(x) - 1.0)
rep_b = accuracy_complete(sample, biased)
print(f"biased exp(x):   R2 = {rep_b.r2:.3f}   L2 = {rep_b.l2:.3f}")
print(f"best correction: {rep_b.corrected.intercept:+.3f} "
      f"{rep_b.corrected.slope:+.3f} * m")
print("high R2 says the corrected version explains the response well;")
print("low L2 says the raw prediction needs that correction badly\n")

print("=== after applying the correction ===")
fixed = PredictionVector(rep_b.corrected.apply(biased.m))
rep_f = accuracy_complete(sample, fixed)
print(f"corrected:       R2 = {rep_f.r2:.3f}   L2 = {rep_f.l2:.3f}")
print("\nreading guide: report R2 and L2 together; R2 bounds the")
print("explanatory power, L2 says how much of the raw MSPE survives")
print("the best affine recalibration")
