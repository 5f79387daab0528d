"""
Scoring with the abstaining averaged classifier
===============================================

Weights every stump by exp(-eta * training error), compares the weight on
each side of a test point, and abstains when the two sides are close.
"""

import numpy as np

from avgclass.core import abstention_threshold, log_ratios, predict_many
from avgclass.experiments import build_stumps
from avgclass.hypotheses import empirical_errors

# A noisy threshold problem on [0, 1]: 5 positions, label flipped 20% of the time.
space, dist = build_stumps()
rng = np.random.default_rng(0)
sample = dist.draw(rng, 200)
print(f"{len(space)} stumps, {sample.m} training examples")

# Empirical errors are all the averaged classifier needs from the data.
errs = empirical_errors(space, sample)
print("best stump error:", errs.min())

# Log ratio of the two sides at each distinct position.
positions = np.unique(dist.X[:, 0])
eta = 20.0
lhat = log_ratios(errs, space.prediction_matrix(positions), eta, space.prior)

# The abstention width that holds with confidence 0.9.
delta = abstention_threshold(sample.m, 0.1, eta)
pred = predict_many(lhat, delta)
for x, v, p in zip(positions, lhat, pred):
    print(f"x={x:.2f}  lhat={v:+.4f}  prediction={p:+d}")
print(f"width={delta:.4f}: positions near the boundary get 0 (abstain)")
