"""
Exact probabilities by enumerating every sample
===============================================

On tiny problems every sample of size m can be listed with its probability,
so deviation probabilities are computed exactly instead of estimated.
"""

import math

import numpy as np

from avgclass.bounds import deviation_tail
from avgclass.hypotheses import DiscreteJointDistribution, lookup_table_space
from avgclass.oracle import deviation_distribution, exact_expected_log_partition, true_log_partition

space = lookup_table_space(2)
dist = DiscreteJointDistribution(np.array([0, 0, 1, 1]), np.array([1, -1, 1, -1]), np.array([0.4, 0.1, 0.2, 0.3]))

# The mean of the empirical log partition sits within eta/(8m) above the true one.
for m in (1, 3, 6):
    for eta in (1.0, 16.0):
        r = true_log_partition(space, dist, eta)
        e = exact_expected_log_partition(space, dist, m, eta)
        print(f"m={m} eta={eta:4}: E[R_hat] - R = {e - r:.6f}  (cap {eta / (8 * m):.6f})")

# Exact chance that the log ratio at x=0 deviates by 2 lam + eta/(8m) or more.
m, eta = 6, 4.0
dev, prob = deviation_distribution(space, dist, m, eta, 0)
print(f"{len(prob)} ordered samples of size {m}")
for lam in (0.1, 0.3, 0.5):
    thr = 2 * lam + eta / (8 * m)
    exact = max(math.fsum(prob[dev >= thr]), math.fsum(prob[-dev >= thr]))
    print(f"lam={lam}: exact {exact:.3e} <= bound {deviation_tail(lam, m):.3e}")
