"""Exponentially weighted log ratios, the abstaining predictor and parameter settings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .hypotheses import DiscreteJointDistribution, HypothesisSpace, Sample, empirical_errors, mistake_counts, true_errors

@dataclass(frozen=True)
class WeightConfig:
    eta: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta!r}")
        if not self.delta >= 0:
            raise ValueError(f"delta must be nonnegative, got {self.delta!r}")


@dataclass(frozen=True)
class LogRatioResult:
    """A log ratio together with the two log-partition terms it came from.

    ``value`` is ``+inf`` when the -1 side carries no weight and ``-inf`` when
    the +1 side carries none.
    """

    value: float
    log_weight_plus: float
    log_weight_minus: float

    def __float__(self) -> float:
        return self.value


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    return eta


def log_partition(errors, weights, eta: float) -> float:
    """``(1/eta) * ln(sum_i w_i * exp(-eta * err_i))`` without overflow.

    The exponents are shifted by their maximum before exponentiating. An
    all-zero weight vector has no mass and gives ``-inf``.
    """
    eta = _check_eta(eta)
    errors = np.asarray(errors, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    if errors.shape != weights.shape:
        raise ValueError(f"{errors.size} errors but {weights.size} weights")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    live = weights > 0
    if not live.any():
        return -math.inf
    a = np.log(weights[live]) - eta * errors[live]
    top = a.max()
    return float((top + np.log(np.exp(a - top).sum())) / eta)


def _combine(plus: float, minus: float) -> float:
    if plus == -math.inf and minus == -math.inf:
        raise ValueError("both sides of the split carry zero weight")
    if minus == -math.inf:
        return math.inf
    if plus == -math.inf:
        return -math.inf
    return plus - minus


def log_ratio(errors, predictions, eta: float, weights=None) -> LogRatioResult:
    """Log ratio at one instance given every hypothesis's error and prediction there."""
    errors = np.asarray(errors, dtype=float)
    predictions = np.asarray(predictions)
    if weights is None:
        weights = np.ones_like(errors)
    weights = np.asarray(weights, dtype=float)
    plus = predictions == 1
    lp = log_partition(errors[plus], weights[plus], eta)
    lm = log_partition(errors[~plus], weights[~plus], eta)
    return LogRatioResult(_combine(lp, lm), lp, lm)


def log_ratios(errors, matrix, eta: float, weights=None) -> np.ndarray:
    """Log ratio at every column of a prediction matrix (hypotheses x instances).

    Each column goes through :func:`log_ratio`, so both sides are summed over
    compacted arrays in hypothesis-index order.
    """
    errors = np.asarray(errors, dtype=float)
    M = np.asarray(matrix)
    if weights is None:
        weights = np.ones_like(errors)
    return np.array([log_ratio(errors, M[:, j], eta, weights).value for j in range(M.shape[1])])


def empirical_log_ratio(space: HypothesisSpace, sample: Sample, eta: float, x) -> LogRatioResult:
    errs = empirical_errors(space, sample)
    preds = space.predictions_at(x)
    return log_ratio(errs, preds, eta, space.prior)


def true_log_ratio(space: HypothesisSpace, dist: DiscreteJointDistribution, eta: float, x) -> LogRatioResult:
    errs = true_errors(space, dist)
    preds = space.predictions_at(x)
    return log_ratio(errs, preds, eta, space.prior)


Number = Union[float, LogRatioResult]


def predict(lr: Number, delta: float) -> int:
    """+1 above ``delta``, -1 below ``-delta``, 0 (abstain) when ``|value| <= delta``."""
    v = float(lr)
    if v > delta:
        return 1
    if v < -delta:
        return -1
    return 0


def predict_many(values, delta: float) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return np.where(v > delta, 1, np.where(v < -delta, -1, 0)).astype(np.int8)


def erm_predict(space: HypothesisSpace, sample: Sample, x) -> tuple[int, int]:
    """Prediction of the empirical risk minimizer at ``x`` and its index (lowest index wins ties)."""
    best = int(np.argmin(mistake_counts(space, sample)))
    return int(space.predictions_at(x)[best]), best


# ---------------------------------------------------------------------------
# Parameter settings
# ---------------------------------------------------------------------------


def _check_conf(delta_conf: float) -> None:
    if not 0 < delta_conf < 1:
        raise ValueError(f"confidence delta must lie in (0, 1), got {delta_conf!r}")


def _check_theta(theta: float) -> None:
    if not 0 < theta < 0.5:
        raise ValueError(f"theta must lie in (0, 1/2), got {theta!r}")


def abstention_threshold(m: int, delta_conf: float, eta: float) -> float:
    """Abstention half-width ``2*sqrt(ln(sqrt(2)/delta)/m) + eta/(8m)``.

    With this width, a nonzero prediction disagrees with the sign of the
    true log ratio on at most ``delta`` of the mass, with probability
    ``1 - delta`` over the sample. Accepts any ``delta < sqrt(2)``.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not 0 < delta_conf < math.sqrt(2):
        raise ValueError(f"delta must lie in (0, sqrt(2)) for a positive log, got {delta_conf!r}")
    eta = _check_eta(eta)
    return 2.0 * math.sqrt(math.log(math.sqrt(2) / delta_conf) / m) + eta / (8.0 * m)


def schedule_params(m: int, class_size: int, delta_conf: float, theta: float) -> tuple[float, float]:
    """Learning rate and abstention width tied to the sample size.

    ``eta = ln(8|H|) m^(1/2 - theta)`` and the matching width, which equals
    :func:`abstention_threshold` evaluated at that ``eta``.
    """
    _check_conf(delta_conf)
    _check_theta(theta)
    if m < 1 or class_size < 1:
        raise ValueError("m and class_size must be positive")
    c = math.log(8 * class_size)
    eta = c * m ** (0.5 - theta)
    delta = 2.0 * math.sqrt(math.log(math.sqrt(2) / delta_conf) / m) + c / (8.0 * m ** (0.5 + theta))
    return eta, delta


def uniform_abstention_threshold(m: int, class_size: int, delta_conf: float, eta: float) -> float:
    """Width ``2*sqrt((2/m) ln(16 m ln|H| / delta^2)) + eta/m`` valid for all ``eta >= 1`` at once."""
    if class_size < 2:
        raise ValueError("class_size must be at least 2 so that ln|H| > 0")
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not delta_conf > 0:
        raise ValueError("delta must be positive")
    if eta < 1:
        raise ValueError(f"eta must be at least 1, got {eta!r}")
    arg = 16.0 * m * math.log(class_size) / delta_conf**2
    if not arg > 1:
        raise ValueError(f"log argument 16 m ln|H| / delta^2 = {arg!r} must exceed 1")
    return 2.0 * math.sqrt(2.0 / m * math.log(arg)) + eta / m


def eta_grid(class_size: float, lam: float) -> list[float]:
    """Learning rates ``4 ln N / (i lam)`` for ``i = 1 .. floor(4 ln N / lam)``, decreasing.

    Empty when ``lam`` exceeds ``4 ln N``.
    """
    if class_size < 2:
        raise ValueError("class size must be at least 2")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    top = 4.0 * math.log(class_size) / lam
    return [top / i for i in range(1, math.floor(top) + 1)]


def nearest_grid_eta(grid, eta: float) -> float:
    """Smallest grid rate no smaller than ``eta``, or the largest rate if none is."""
    if not grid:
        raise ValueError("empty eta grid")
    above = [g for g in grid if g >= eta]
    return min(above) if above else max(grid)
