"""Reproducing the reference simulation tables at demo scale.

Two studies: population R2 of a correctly specified hazard model across
six Weibull designs, and finite-sample behavior of the censored measures
as the censoring rate and sample size vary.  Full-scale versions of both
run inside the acceptance suite.
"""

from predacc.simulation import CoxWeibullDesign, approx_population, run_scenario

print("=== population R2 of the hazard model, six designs ===")
print("(20 Monte Carlo reps of n = 2000 each; the acceptance suite")
print(" uses 100 x 5000)\n")
print(f"{'beta':>5s} {'nu':>5s} {'rho2':>8s} {'se':>8s}")
for beta, nu in [(0.2, 0.5), (0.2, 1.0), (0.2, 10.0),
                 (5.0, 0.5), (5.0, 1.0), (5.0, 10.0)]:
    est = approx_population(
        CoxWeibullDesign(beta=beta, nu=nu, n=2), "cox",
        mc_reps=20, mc_n=2000, seed=31415,
    )
    print(f"{beta:5.1f} {nu:5.1f} {est.rho2:8.3f} {est.rho2_se:8.4f}")

print()
print("a huge hazard ratio does not imply high predictive power: the")
print("beta = 5 designs span rho2 from 0.09 to 0.97 as the shape varies")

print()
print("=== finite-sample cells under independent censoring ===")
config = {
    "design": {"kind": "aft-weibull"},
    "censoring": {"kind": "independent", "rates": [0.0, 0.25, 0.5]},
    "sample_sizes": [100, 300],
    "models": ["cox"],
    "replications": 30,
    "seed": 27182,
}
result = run_scenario(config)
print(f"{'rate':>5s} {'n':>5s} {'mean R2':>8s} {'sd':>7s} {'mean L2':>8s} {'sd':>7s}")
for cell in result.cells:
    print(f"{cell.censoring_rate:5.2f} {cell.n:5d} {cell.mean_r2:8.3f} "
          f"{cell.sd_r2:7.3f} {cell.mean_l2:8.3f} {cell.sd_l2:7.3f}")

print()
print("means are stable across censoring rates; only the Monte Carlo")
print("spread grows as information is censored away or n shrinks")
