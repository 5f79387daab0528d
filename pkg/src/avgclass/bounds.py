"""Closed-form generalization and deviation bounds.

Every calculator returns raw values. Probability-valued bounds can exceed 1
(vacuous); :class:`BoundReport` carries both the raw value and the value
clamped to ``[0, 1]``, plus a flag telling whether the bound's
preconditions held at the given inputs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .core import _check_conf, _check_theta, schedule_params
from .hypotheses import DiscreteJointDistribution, HypothesisSpace, true_errors


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict = field(default_factory=dict)
    value: float = math.nan
    valid: bool = True
    probability: bool = True

    @property
    def clamped(self) -> float:
        if not self.probability:
            return self.value
        return min(1.0, max(0.0, self.value))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["clamped"] = self.clamped
        return d


def _exp(x: float) -> float:
    return math.inf if x > 709.0 else math.exp(x)


def _check_positive_m(m) -> None:
    if not (isinstance(m, (int, np.integer)) or float(m).is_integer()) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")


# ---------------------------------------------------------------------------
# Deviation of the empirical log ratio
# ---------------------------------------------------------------------------


def deviation_tail(lam: float, m: int) -> float:
    """``2 exp(-2 lam^2 m)``: chance that the empirical log ratio at a fixed
    instance falls ``2 lam + eta/(8m)`` or more on one side of the true one."""
    _check_positive_m(m)
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return 2.0 * math.exp(-2.0 * lam * lam * m)


def random_instance_tail(lam: float, m: int) -> float:
    """``sqrt(2) exp(-lam^2 m)``.

    Serves as both levels of the random-instance statement: with probability
    at most this value over samples, the fraction of instances deviating by
    ``2 lam + eta/(8m)`` is at least this value.
    """
    _check_positive_m(m)
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return math.sqrt(2.0) * math.exp(-lam * lam * m)


def uniform_eta_tail(class_size: float, lam: float, m: int) -> float:
    """``(8 ln N / lam) exp(-lam^2 m / 2)``: deviation of the log partition
    holding simultaneously for every ``eta >= 1``."""
    _check_positive_m(m)
    if class_size < 2:
        raise ValueError("class size must be at least 2")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return 8.0 * math.log(class_size) / lam * math.exp(-lam * lam * m / 2.0)


# The log-ratio form over all eta >= 1 has the same right-hand side.
uniform_log_ratio_tail = uniform_eta_tail


# ---------------------------------------------------------------------------
# Performance relative to the best hypothesis
# ---------------------------------------------------------------------------


class BestHypothesisBounds(NamedTuple):
    at_zero: BoundReport
    at_two_delta: BoundReport
    at_two_delta_relaxed: BoundReport


def best_hypothesis_bounds(
    epsilon: float, gamma: float, eta: float, delta: float, class_size: float
) -> BestHypothesisBounds:
    """Bounds on ``Pr[y l(x) <= 0]`` and ``Pr[y l(x) <= 2 delta]`` for the true log ratio.

    Parameters
    ----------
    epsilon : float
        True error of the best hypothesis.
    gamma : float
        Slack separating strong from weak hypotheses; needs
        ``gamma >= ln(8 K) / eta``.
    eta, delta : float
        Learning rate and abstention width; needs ``delta * eta <= 1/2``.
    class_size : float
        ``K = |H|`` for a finite uniform class, or ``1 / V`` where ``V`` is the
        prior mass of hypotheses with error at most ``epsilon``.

    Returns
    -------
    BestHypothesisBounds
        ``at_zero = 2 (1 + 2K e^{-eta gamma}) (epsilon + gamma)``;
        ``at_two_delta = (1 + e^{2 delta eta}) (1 + 2K e^{eta (2 delta - gamma)}) (epsilon + gamma)``
        and its relaxation with the leading factor replaced by 4.
        Preconditions that fail are reported through ``valid``; the raw
        values are returned regardless.
    """
    if not gamma > 0 or not eta > 0 or delta < 0 or class_size <= 0:
        raise ValueError("need gamma > 0, eta > 0, delta >= 0 and a positive class size")
    weak_cap = class_size * math.exp(-eta * gamma)
    ok = delta * eta <= 0.5 and gamma >= math.log(8.0 * class_size) / eta
    inputs = dict(epsilon=epsilon, gamma=gamma, eta=eta, delta=delta, class_size=class_size)
    base = epsilon + gamma
    at_zero = 2.0 * (1.0 + 2.0 * weak_cap) * base
    inner = 1.0 + 2.0 * class_size * _exp(eta * (2.0 * delta - gamma))
    tight = (1.0 + _exp(2.0 * delta * eta)) * inner * base
    relaxed = 4.0 * inner * base
    return BestHypothesisBounds(
        BoundReport("sign_error", inputs, at_zero, ok),
        BoundReport("margin_2delta", inputs, tight, ok),
        BoundReport("margin_2delta_relaxed", inputs, relaxed, ok),
    )


def volume_bounds(epsilon: float, gamma: float, eta: float, delta: float, volume: float) -> BestHypothesisBounds:
    """:func:`best_hypothesis_bounds` for a weighted class, with ``1/volume`` in place of ``|H|``."""
    if not 0 < volume <= 1:
        raise ValueError(f"volume must lie in (0, 1], got {volume!r}")
    return best_hypothesis_bounds(epsilon, gamma, eta, delta, 1.0 / volume)


def epsilon_volume(space: HypothesisSpace, dist: DiscreteJointDistribution, epsilon: float) -> float:
    """Prior mass of the hypotheses whose true error is at most ``epsilon``."""
    errs = true_errors(space, dist)
    return math.fsum(space.prior[errs <= epsilon])


class ScheduleBounds(NamedTuple):
    sign_error: float
    abstain_margin: float
    m_threshold: float
    sign_error_active: bool
    abstain_margin_active: bool


def schedule_bounds(m: int, class_size: int, delta_conf: float, theta: float, epsilon: float) -> ScheduleBounds:
    """Best-hypothesis bounds under the sample-size-driven learning rate.

    ``sign_error = (2 + 1/(4m)) (eps + m^{theta-1/2} + ln m / (m^{1/2-theta} ln 8|H|))``,
    meaningful for ``m >= 8``; ``abstain_margin = 5 (eps + 2 delta + m^{theta-1/2})``,
    meaningful once ``m >= [8 sqrt(ln(sqrt2/delta)) ln(8|H|)]^{1/theta}``.
    """
    _check_positive_m(m)
    _check_conf(delta_conf)
    _check_theta(theta)
    _, width = schedule_params(m, class_size, delta_conf, theta)
    c = math.log(8 * class_size)
    decay = m ** (0.5 - theta)
    sign_error = (2.0 + 1.0 / (4.0 * m)) * (epsilon + 1.0 / decay + math.log(m) / (decay * c))
    abstain = 5.0 * (epsilon + 2.0 * width + 1.0 / decay)
    threshold = (8.0 * math.sqrt(math.log(math.sqrt(2) / delta_conf)) * c) ** (1.0 / theta)
    return ScheduleBounds(sign_error, abstain, threshold, m >= 8, m >= threshold)


def occam_bound(m: int, class_size: int, delta_conf: float, epsilon_star: float) -> float:
    """``eps* + sqrt(ln(|H|/delta)/m)``: the finite-class uniform convergence
    bound for the empirical risk minimizer, big-O constant set to 1."""
    _check_positive_m(m)
    _check_conf(delta_conf)
    if class_size < 1:
        raise ValueError("class_size must be positive")
    return epsilon_star + math.sqrt(math.log(class_size / delta_conf) / m)


def mistake_and_abstain_summary(
    m: int, class_size: int, delta_conf: float, theta: float, epsilon: float
) -> tuple[BoundReport, BoundReport]:
    """Headline mistake and abstention bounds for the abstaining predictor.

    Mistake: ``sign_error + delta``. Abstention: ``abstain_margin + delta``.
    Both instantiate the asymptotic terms with the explicit constants of
    :func:`schedule_bounds`, so they are labelled as instantiated O-terms.
    """
    sb = schedule_bounds(m, class_size, delta_conf, theta, epsilon)
    inputs = dict(m=m, class_size=class_size, delta_conf=delta_conf, theta=theta, epsilon=epsilon,
                  note="O-terms instantiated with explicit constants")
    return (
        BoundReport("mistake", inputs, sb.sign_error + delta_conf, sb.sign_error_active),
        BoundReport("abstain", inputs, sb.abstain_margin + delta_conf, sb.abstain_margin_active),
    )


# ---------------------------------------------------------------------------
# Named access for sweeps
# ---------------------------------------------------------------------------


def _report(name, fn, probability=True, **kw) -> BoundReport:
    return BoundReport(name, kw, float(fn(**kw)), True, probability)


def evaluate(name: str, **params) -> list[BoundReport]:
    """Evaluate a bound by name; returns one or more reports."""
    if name == "deviation":
        return [_report(name, deviation_tail, lam=params["lam"], m=params["m"])]
    if name == "random-instance":
        return [_report(name, random_instance_tail, lam=params["lam"], m=params["m"])]
    if name == "uniform-eta":
        return [_report(name, uniform_eta_tail, class_size=params["class_size"], lam=params["lam"], m=params["m"])]
    if name == "best-hypothesis":
        return list(best_hypothesis_bounds(params["epsilon"], params["gamma"], params["eta"], params["delta"],
                                           params["class_size"]))
    if name == "volume":
        return list(volume_bounds(params["epsilon"], params["gamma"], params["eta"], params["delta"],
                                  params["volume"]))
    if name == "schedule":
        m, k, dc, th, eps = (params[p] for p in ("m", "class_size", "delta_conf", "theta", "epsilon"))
        sb = schedule_bounds(m, k, dc, th, eps)
        eta, width = schedule_params(m, k, dc, th)
        inputs = dict(m=m, class_size=k, delta_conf=dc, theta=th, epsilon=eps)
        return [
            BoundReport("schedule_eta", inputs, eta, True, False),
            BoundReport("schedule_delta", inputs, width, True, False),
            BoundReport("sign_error", inputs, sb.sign_error, sb.sign_error_active),
            BoundReport("abstain_margin", inputs, sb.abstain_margin, sb.abstain_margin_active),
            BoundReport("m_threshold", inputs, sb.m_threshold, True, False),
        ]
    if name == "occam":
        return [_report(name, occam_bound, m=params["m"], class_size=params["class_size"],
                        delta_conf=params["delta_conf"], epsilon_star=params["epsilon"])]
    if name == "summary":
        return list(mistake_and_abstain_summary(params["m"], params["class_size"], params["delta_conf"],
                                                params["theta"], params["epsilon"]))
    raise KeyError(name)


BOUND_PARAMS = {
    "deviation": ("lam", "m"),
    "random-instance": ("lam", "m"),
    "uniform-eta": ("class_size", "lam", "m"),
    "best-hypothesis": ("epsilon", "gamma", "eta", "delta", "class_size"),
    "volume": ("epsilon", "gamma", "eta", "delta", "volume"),
    "schedule": ("m", "class_size", "delta_conf", "theta", "epsilon"),
    "occam": ("m", "class_size", "delta_conf", "epsilon"),
    "summary": ("m", "class_size", "delta_conf", "theta", "epsilon"),
}
