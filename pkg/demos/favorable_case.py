"""
When averaging beats the best hypothesis
========================================

Eight equally likely points. One hypothesis errs only on point 0; ten thousand
others each err on two points, arranged so every point is handled correctly
by three quarters of them. The vote is right everywhere, while the empirical
risk minimizer sometimes picks one of the weaker hypotheses.
"""

import math

import numpy as np

from avgclass.experiments import ExperimentConfig, load_problem, run_experiment

cfg = ExperimentConfig.for_scenario("favorable", trials=300)
problem = load_problem(cfg)
truth = problem.true_log_ratios(1.0)
k = len(problem.space) - 1

margins = problem.dist.y * truth
print("y * l(x) at each point:", np.round(margins, 6))
print("closed form on points 1..7:", math.log(3 + 4 * math.exp(1 / 8) / k))
print("floor on point 0:          ", math.log(3 - 12 * math.exp(1 / 8) / k))

agg = run_experiment(cfg).aggregate
print(f"averaged vote error over {cfg.trials} samples of size {cfg.m}: {agg['mean_mistake_rate']:.4f}")
print(f"ERM error over the same samples:               {agg['mean_erm_error']:.4f}")
