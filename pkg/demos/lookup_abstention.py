"""
Abstaining on unseen points
===========================

With every binary function on a finite domain as the hypothesis class, the
functions pair up: for each table there is one differing only at an unseen x,
with the same training error. The two sides of x then carry identical
weight, so the log ratio is exactly zero and the classifier abstains.
"""

import numpy as np

from avgclass.core import log_ratios, predict_many
from avgclass.hypotheses import Sample, empirical_errors, lookup_table_space

space = lookup_table_space(12)
print(len(space), "hypotheses")

sample = Sample(np.array([0, 3, 3, 7, 9]), np.array([1, -1, -1, 1, -1]))
lhat = log_ratios(empirical_errors(space, sample), space.prediction_matrix(np.arange(12)), 2.0, space.prior)
pred = predict_many(lhat, 0.05)

for x in range(12):
    seen = "seen  " if x in sample.X else "unseen"
    print(f"x={x:2d} {seen} lhat={float(lhat[x])!r:>22}  prediction={pred[x]:+d}")

# On a seen point the ratio is (count of +1 labels - count of -1 labels) / m.
print("x=3 closed form:", -2 / sample.m)
