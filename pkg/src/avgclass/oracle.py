"""Exact ground truth on tiny problems by enumerating every possible sample.

All functions of a sample used here (empirical errors, log partitions, log
ratios) depend on the sample only through how often each atom was drawn, so
enumeration produces atom-count vectors alongside each probability.
Probabilities are accumulated with :func:`math.fsum`, which is correctly
rounded and therefore independent of summation order or partitioning.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator

import numpy as np

from .core import log_partition, log_ratio
from .hypotheses import DiscreteJointDistribution, HypothesisSpace, Sample, empirical_error, true_errors

DEFAULT_BUDGET = 2_000_000
NAIVE_EXPONENT_GUARD = 700.0


class BudgetExceeded(ValueError):
    pass


def _check_budget(n_atoms: int, m: int, budget: int) -> None:
    if m < 1:
        raise ValueError("m must be a positive integer")
    size = n_atoms**m
    if size > budget:
        raise BudgetExceeded(f"enumeration needs {n_atoms}^{m} = {size} ordered samples, budget is {budget}")


def ordered_tuples(dist: DiscreteJointDistribution, m: int, budget: int = DEFAULT_BUDGET):
    """Every ordered m-tuple of atom indices with its product probability.

    Returns ``(idx, prob)`` with ``idx`` of shape ``(|atoms|^m, m)`` in
    lexicographic order.
    """
    n = len(dist)
    _check_budget(n, m, budget)
    idx = np.indices((n,) * m).reshape(m, -1).T
    prob = np.prod(dist.p[idx], axis=1)
    return idx, prob


def ordered_counts(dist: DiscreteJointDistribution, m: int, budget: int = DEFAULT_BUDGET):
    """Atom-count vectors ``(T, |atoms|)`` and probabilities of all ordered samples."""
    idx, prob = ordered_tuples(dist, m, budget)
    counts = np.stack([(idx == a).sum(axis=1) for a in range(len(dist))], axis=1)
    return counts, prob


def multiset_counts(dist: DiscreteJointDistribution, m: int, budget: int = DEFAULT_BUDGET):
    """Distinct atom-count vectors with multinomial probabilities.

    Same distribution over counts as :func:`ordered_counts`, collapsed; lets
    exact expectations reach sample sizes where ordered enumeration cannot.
    """
    n = len(dist)
    size = math.comb(m + n - 1, n - 1)
    if size > budget:
        raise BudgetExceeded(f"enumeration needs {size} count vectors, budget is {budget}")
    rows = []
    probs = []
    for combo in itertools.combinations_with_replacement(range(n), m):
        c = np.bincount(combo, minlength=n)
        coef = math.factorial(m)
        for k in c:
            coef //= math.factorial(int(k))
        rows.append(c)
        probs.append(coef * math.prod(float(dist.p[a]) ** int(k) for a, k in enumerate(c)))
    return np.array(rows), np.array(probs)


def enumerate_samples(dist: DiscreteJointDistribution, m: int, budget: int = DEFAULT_BUDGET) -> Iterator[tuple[Sample, float]]:
    """Yield every ordered sample of size ``m`` with its probability."""
    idx, prob = ordered_tuples(dist, m, budget)
    for row, pr in zip(idx, prob):
        yield Sample(dist.X[row], dist.y[row]), float(pr)


def _counts(dist, m, budget, method):
    if method == "ordered":
        return ordered_counts(dist, m, budget)
    if method == "multiset":
        return multiset_counts(dist, m, budget)
    raise ValueError(f"unknown enumeration method {method!r}")


def _rowwise_log_partition(errs: np.ndarray, weights: np.ndarray, eta: float) -> np.ndarray:
    live = weights > 0
    if not live.any():
        return np.full(errs.shape[0], -np.inf)
    a = np.log(weights[live])[None, :] - eta * errs[:, live]
    top = a.max(axis=1, keepdims=True)
    return (top[:, 0] + np.log(np.exp(a - top).sum(axis=1))) / eta


def subset_mask(space: HypothesisSpace, x=None, side: int | None = None) -> np.ndarray:
    """Hypotheses predicting ``side`` at ``x``; the whole space when ``x`` is None."""
    if x is None:
        return np.ones(len(space), dtype=bool)
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    return space.predictions_at(x) == side


def _mistakes(space: HypothesisSpace, dist: DiscreteJointDistribution) -> np.ndarray:
    return (space.prediction_matrix(dist.X) != dist.y[None, :]).astype(np.int64)


def empirical_log_partitions(space, dist, counts: np.ndarray, m: int, eta: float, subset: np.ndarray) -> np.ndarray:
    """Empirical log partition of ``subset`` for each count vector."""
    mist = _mistakes(space, dist)[subset]
    errs = counts @ mist.T / m
    return _rowwise_log_partition(errs, space.prior[subset], eta)


def true_log_partition(space: HypothesisSpace, dist: DiscreteJointDistribution, eta: float, subset=None) -> float:
    subset = np.ones(len(space), dtype=bool) if subset is None else np.asarray(subset, dtype=bool)
    return log_partition(true_errors(space, dist)[subset], space.prior[subset], eta)


def exact_expected_log_partition(
    space: HypothesisSpace,
    dist: DiscreteJointDistribution,
    m: int,
    eta: float,
    x=None,
    side: int | None = None,
    *,
    subset=None,
    budget: int = DEFAULT_BUDGET,
    method: str = "ordered",
) -> float:
    """Expectation over ``S ~ D^m`` of the prior-weighted empirical log partition.

    The subset is the hypotheses predicting ``side`` at ``x`` (or an explicit
    boolean ``subset``; or the whole space).
    """
    if subset is None:
        subset = subset_mask(space, x, side)
    subset = np.asarray(subset, dtype=bool)
    counts, prob = _counts(dist, m, budget, method)
    vals = empirical_log_partitions(space, dist, counts, m, eta, subset)
    return math.fsum(prob * vals)


def _deviations(space, dist, m, eta, x, counts):
    plus = subset_mask(space, x, 1)
    truth = log_ratio(true_errors(space, dist), np.where(plus, 1, -1), eta, space.prior).value
    lp = empirical_log_partitions(space, dist, counts, m, eta, plus)
    lm = empirical_log_partitions(space, dist, counts, m, eta, ~plus)
    if math.isinf(truth):
        # One side is empty for every sample, so the empirical ratio equals the true one.
        return np.zeros(len(counts))
    return truth - (lp - lm)


def exact_deviation_probability(
    space: HypothesisSpace,
    dist: DiscreteJointDistribution,
    m: int,
    eta: float,
    x,
    threshold: float,
    sign: int = 1,
    *,
    budget: int = DEFAULT_BUDGET,
    method: str = "ordered",
) -> float:
    """Exact ``Pr_S[sign * (true - empirical log ratio at x) >= threshold]``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    counts, prob = _counts(dist, m, budget, method)
    dev = sign * _deviations(space, dist, m, eta, x, counts)
    return math.fsum(prob[dev >= threshold])


def deviation_distribution(space, dist, m, eta, x, *, budget: int = DEFAULT_BUDGET, method: str = "ordered"):
    """``(true - empirical log ratio at x, probability)`` for every enumerated sample.

    Lets many thresholds be checked against one enumeration.
    """
    counts, prob = _counts(dist, m, budget, method)
    return _deviations(space, dist, m, eta, x, counts), prob


def naive_log_ratio(space: HypothesisSpace, sample: Sample, eta: float, x) -> float:
    """Direct-summation empirical log ratio, for cross-checking the stable core.

    Refuses when ``eta * max error`` exceeds 700, where plain exponentials
    start to underflow.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    hyps = [space[i] for i in range(len(space))]
    errs = [empirical_error(h, sample) for h in hyps]
    if eta * max(errs) > NAIVE_EXPONENT_GUARD:
        raise ValueError(f"eta * max error = {eta * max(errs):g} exceeds the naive-summation guard")
    plus = minus = 0.0
    for h, e, mu in zip(hyps, errs, space.prior):
        w = float(mu) * math.exp(-eta * e)
        if h(x) == 1:
            plus += w
        else:
            minus += w
    if minus == 0.0:
        return math.inf
    if plus == 0.0:
        return -math.inf
    return math.log(plus / minus) / eta
