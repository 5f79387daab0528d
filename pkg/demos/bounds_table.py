"""
How the guarantees scale
========================

Bound values as the sample grows, using the sample-size-driven learning rate.
"""

from avgclass.bounds import mistake_and_abstain_summary, occam_bound, schedule_bounds
from avgclass.core import schedule_params

k, conf, theta, eps = 100, 0.05, 0.25, 0.05
print(f"{'m':>9} {'eta':>9} {'delta':>8} {'sign err':>9} {'mistake':>8} {'abstain':>8} {'ERM':>7}")
for m in (10**3, 10**4, 10**5, 10**6, 10**8):
    eta, delta = schedule_params(m, k, conf, theta)
    sb = schedule_bounds(m, k, conf, theta, eps)
    mistake, abstain = mistake_and_abstain_summary(m, k, conf, theta, eps)
    print(f"{m:>9} {eta:9.2f} {delta:8.4f} {sb.sign_error:9.4f} {mistake.value:8.4f} "
          f"{abstain.value:8.4f} {occam_bound(m, k, conf, eps):7.4f}")
print("abstention bound needs m >=", f"{sb.m_threshold:.3g}")
