"""
When averaging doubles the error
================================

One region (mass 1 - 2 eps) is labelled correctly by every hypothesis. On the
rest, each hypothesis is right a bit less than half the time. The best single
hypothesis errs on about eps of the mass, while the sign of the averaged vote
errs on the whole 2 eps region.
"""

import math

from avgclass.experiments import ExperimentConfig, run_experiment

cfg = ExperimentConfig.for_scenario("adversarial", trials=100)
agg = run_experiment(cfg).aggregate

print(f"eps={agg['epsilon']}, eta={agg['eta']}, delta={agg['delta']}")
print(f"best hypothesis error      {agg['best_hypothesis_true_error']:.4f}")
print(f"sign of averaged vote      {agg['true_sign_error']:.4f}  (2 eps = {agg['two_epsilon']})")
print(f"ERM error (mean of trials) {agg['mean_erm_error']:.4f}")

# On the hard region the margin y * l(x) sits near -4 delta.
print(f"mean margin on hard region {agg['region_mean_margin']:+.4f}"
      f"  (-4 delta = {agg['region_margin_target']:+.3f},"
      f" closed form {agg['region_margin_closed_form']:+.4f})")
print("abstaining with width delta still errs there:", agg["mean_mistake_rate"] > 1.5 * agg["epsilon"])
assert math.isclose(agg["true_sign_error"], agg["two_epsilon"])
