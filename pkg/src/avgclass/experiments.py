"""Seeded Monte Carlo experiments on explicit finite problems.

Every trial draws its own generator from ``(master_seed, trial index)``, so
trials can run on any number of worker threads and the report is identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Callable

import numpy as np

from . import bounds as bnd
from .core import abstention_threshold, eta_grid, log_partition, log_ratios, predict_many, schedule_params
from .hypotheses import (
    DiscreteJointDistribution,
    HypothesisSpace,
    TableSpace,
    lookup_table_space,
    stump_space,
    true_errors,
)
from .oracle import DEFAULT_BUDGET, empirical_log_partitions, multiset_counts

# ---------------------------------------------------------------------------
# Problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Problem:
    """A hypothesis space and distribution with everything precomputed on the atoms."""

    name: str
    space: HypothesisSpace
    dist: DiscreteJointDistribution
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        M = self.space.prediction_matrix(self.dist.X)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "mistakes", (M != self.dist.y[None, :]).astype(np.int64))
        object.__setattr__(self, "errors", true_errors(self.space, self.dist))

    def true_log_ratios(self, eta: float) -> np.ndarray:
        return log_ratios(self.errors, self.matrix, eta, self.space.prior)


def build_adversarial(
    epsilon: float,
    eta: float,
    delta: float,
    x2_size: int = 200,
    class_size: int = 500,
    seed: int = 0,
) -> tuple[TableSpace, DiscreteJointDistribution]:
    """Construction where averaging doubles the best hypothesis's error.

    Instance 0 is the region every hypothesis gets right (mass ``1 - 2 eps``).
    Instances ``1..x2_size`` share mass ``2 eps``; on each, every hypothesis is
    independently right with probability ``1/2 - eta*delta``.
    """
    if not 0 <= epsilon < 0.25:
        raise ValueError(f"epsilon must lie in [0, 1/4), got {epsilon!r}")
    if not eta * delta < 0.5:
        raise ValueError(f"eta * delta must be below 1/2, got {eta * delta!r}")
    if x2_size < 1 or class_size < 1:
        raise ValueError("x2_size and class_size must be positive")
    rng = np.random.default_rng(seed)
    labels = np.concatenate([[1], rng.choice([-1, 1], size=x2_size)]).astype(np.int8)
    right = rng.random((class_size, x2_size)) < 0.5 - eta * delta
    table = np.empty((class_size, x2_size + 1), dtype=np.int8)
    table[:, 0] = labels[0]
    table[:, 1:] = np.where(right, labels[None, 1:], -labels[None, 1:])
    p = np.concatenate([[1.0 - 2.0 * epsilon], np.full(x2_size, 2.0 * epsilon / x2_size)])
    dist = DiscreteJointDistribution(np.arange(x2_size + 1), labels, p)
    return TableSpace(table), dist


def build_favorable(class_size: int) -> tuple[TableSpace, DiscreteJointDistribution]:
    """Construction where averaging beats the best single hypothesis.

    Eight instances of mass 1/8 with alternating labels. Hypothesis 0 is
    wrong only on instance 0 (error 1/8). The others fall into four
    interleaved groups; group ``g`` is wrong exactly on instances ``2g`` and
    ``2g + 1`` (error 1/4), so every instance is labelled correctly by 3/4 of
    them.
    """
    rest = class_size - 1
    if class_size < 5 or rest % 4:
        raise ValueError(f"class_size - 1 must be a positive multiple of 4, got {class_size}")
    labels = np.array([1 if j % 2 == 0 else -1 for j in range(8)], dtype=np.int8)
    table = np.tile(labels, (class_size, 1))
    table[0, 0] = -labels[0]
    group = (np.arange(1, class_size) - 1) % 4
    for g in range(4):
        rows = 1 + np.flatnonzero(group == g)
        table[np.ix_(rows, [2 * g, 2 * g + 1])] *= -1
    dist = DiscreteJointDistribution(np.arange(8), labels, np.full(8, 0.125))
    return TableSpace(table), dist


def build_stumps(n_cuts: int = 20, positions: int = 5, noise: float = 0.2, boundary: float = 0.45):
    """Noisy one-dimensional threshold problem: ``2 * positions`` atoms, ``2 * n_cuts`` stumps."""
    xs = np.linspace(0.1, 0.9, positions)
    X, y, p = [], [], []
    for x in xs:
        target = 1 if x > boundary else -1
        for label in (target, -target):
            X.append([x])
            y.append(label)
            p.append((1.0 - noise if label == target else noise) / positions)
    dist = DiscreteJointDistribution(np.array(X), np.array(y), np.array(p))
    return stump_space(np.linspace(0.0, 1.0, n_cuts)), dist


def build_lookup(domain_size: int = 12, seed: int = 0):
    """All binary functions on a small domain, uniform instances, a fixed random target."""
    rng = np.random.default_rng(seed)
    labels = rng.choice([-1, 1], size=domain_size).astype(np.int8)
    dist = DiscreteJointDistribution(np.arange(domain_size), labels, np.full(domain_size, 1.0 / domain_size))
    return lookup_table_space(domain_size), dist


def build_tiny():
    """Every binary function on three instances against a five-atom noisy distribution."""
    X = np.array([0, 0, 1, 1, 2])
    y = np.array([1, -1, 1, -1, 1])
    p = np.array([0.3, 0.1, 0.15, 0.25, 0.2])
    return lookup_table_space(3), DiscreteJointDistribution(X, y, p)


PROBLEMS: dict[str, Callable[..., tuple]] = {
    "adversarial": build_adversarial,
    "favorable": build_favorable,
    "stumps": build_stumps,
    "lookup": build_lookup,
    "tiny": build_tiny,
}


# ---------------------------------------------------------------------------
# Configuration and reports
# ---------------------------------------------------------------------------

_DEFAULTS = {
    "concentration": dict(problem="stumps", m=200, trials=1000, test_points=500,
                          lambdas=[0.02 * k for k in range(1, 11)]),
    "abstention": dict(problem="stumps", m=200, trials=2000, test_points=500, delta_conf=0.1),
    "lookup": dict(problem="lookup", m=8, trials=200, eta=1.0, delta=0.05, test_points=0),
    "adversarial": dict(problem="adversarial", m=200, trials=200, eta=1.0, delta=0.1, test_points=0,
                        params=dict(epsilon=0.05)),
    "favorable": dict(problem="favorable", m=50, trials=500, eta=1.0, delta=0.0, test_points=0,
                      params=dict(class_size=10001)),
    "stumps": dict(problem="stumps", m=200, trials=500, test_points=0),
    "eta_uniformity": dict(problem="tiny", m=30, trials=500, test_points=0, lambdas=[0.25, 0.5, 0.75, 1.0]),
}

SCENARIOS = tuple(_DEFAULTS)


@dataclass
class ExperimentConfig:
    scenario: str
    problem: str = ""
    m: int = 200
    trials: int = 100
    eta: float | str = "auto"
    delta: float | str = "auto"
    delta_conf: float = 0.05
    theta: float = 0.25
    master_seed: int = 0
    test_points: int = 0
    lambdas: list = field(default_factory=lambda: [0.05, 0.1, 0.2])
    workers: int = 1
    params: dict = field(default_factory=dict)

    @classmethod
    def for_scenario(cls, scenario: str, **overrides) -> "ExperimentConfig":
        if scenario not in _DEFAULTS:
            raise ValueError(f"unknown scenario {scenario!r}; valid scenarios: {', '.join(SCENARIOS)}")
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        base = dict(_DEFAULTS[scenario])
        params = dict(base.pop("params", {}))
        params.update(overrides.pop("params", None) or {})
        base.update(overrides)
        cfg = cls(scenario=scenario, params=params, **{k: v for k, v in base.items() if k != "scenario"})
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.test_points < 0:
            raise ValueError("test_points must be nonnegative")
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}; valid problems: {', '.join(PROBLEMS)}")
        for name in ("eta", "delta"):
            v = getattr(self, name)
            if v != "auto" and not (isinstance(v, (int, float)) and v >= 0):
                raise ValueError(f"{name} must be 'auto' or a nonnegative number")
        if self.eta != "auto" and not self.eta > 0:
            raise ValueError("eta must be positive")
        if not 0 < self.delta_conf < 1:
            raise ValueError("delta_conf must lie in (0, 1)")
        if not 0 < self.theta < 0.5:
            raise ValueError("theta must lie in (0, 1/2)")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrialReport:
    scenario: str
    config: dict
    rows: list
    aggregate: dict
    bounds: list
    seeds: list

    def to_json(self) -> str:
        payload = dict(
            scenario=self.scenario,
            config=self.config,
            aggregate=self.aggregate,
            bounds=[b.as_dict() for b in self.bounds],
            seeds=self.seeds,
            trials=self.rows,
        )
        return json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        cols = list(self.rows[0])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in self.rows:
            w.writerow([format_number(row[c]) for c in cols])
        agg = []
        for c in cols:
            if c == "trial":
                agg.append("aggregate")
            elif c == "seed":
                agg.append("")
            else:
                agg.append(format_number(float(np.mean([r[c] for r in self.rows]))))
        w.writerow(agg)
        return buf.getvalue()


def format_number(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v == math.inf:
        return "+inf"
    if v == -math.inf:
        return "-inf"
    return f"{v:.17g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v):
            return "+inf" if v > 0 else "-inf"
        if math.isnan(v):
            return None
        return v
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


# ---------------------------------------------------------------------------
# Trial machinery
# ---------------------------------------------------------------------------


def trial_seed_sequence(master_seed: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master_seed), spawn_key=(int(trial),))


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed_sequence(master_seed, trial))


def trial_seed(master_seed: int, trial: int) -> int:
    return int(trial_seed_sequence(master_seed, trial).generate_state(1, np.uint64)[0])


def run_trials(cfg: ExperimentConfig, fn: Callable[[int, np.random.Generator], dict]) -> list[dict]:
    """Run ``fn(trial, rng)`` for every trial, results in trial order."""

    def one(i):
        return fn(i, trial_rng(cfg.master_seed, i))

    if cfg.workers == 1:
        return [one(i) for i in range(cfg.trials)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(one, range(cfg.trials)))


def load_problem(cfg: ExperimentConfig) -> Problem:
    builder = PROBLEMS[cfg.problem]
    kwargs = dict(cfg.params)
    if cfg.problem == "adversarial":
        eta, delta = resolve_parameters(cfg, kwargs.get("class_size", 500))
        kwargs.setdefault("epsilon", 0.05)
        kwargs.setdefault("seed", cfg.master_seed)
        space, dist = builder(eta=eta, delta=delta, **kwargs)
    else:
        space, dist = builder(**kwargs)
    return Problem(cfg.problem, space, dist, kwargs)


def resolve_parameters(cfg: ExperimentConfig, class_size: int | None) -> tuple[float, float]:
    """Concrete ``(eta, delta)``; "auto" means the sample-size schedule and its width."""
    eta = cfg.eta
    if eta == "auto":
        if class_size is None:
            raise ValueError("eta='auto' needs the class size")
        eta = schedule_params(cfg.m, class_size, cfg.delta_conf, cfg.theta)[0]
    delta = cfg.delta
    if delta == "auto":
        delta = abstention_threshold(cfg.m, cfg.delta_conf, eta)
    return float(eta), float(delta)


def _draw_counts(problem: Problem, rng: np.random.Generator, m: int) -> np.ndarray:
    return np.bincount(problem.dist.draw_indices(rng, m), minlength=len(problem.dist))


def _mass(problem: Problem, rng: np.random.Generator, test_points: int) -> np.ndarray:
    # Weight of each atom when evaluating rates: exact mass, or the empirical share of test draws.
    if test_points:
        return _draw_counts(problem, rng, test_points) / test_points
    return np.asarray(problem.dist.p)


def _rates(problem: Problem, pred: np.ndarray, truth_sign: np.ndarray, mass: np.ndarray) -> dict:
    y = problem.dist.y
    nonzero = pred != 0
    abstain = math.fsum(mass[~nonzero])
    mistake = math.fsum(mass[nonzero & (pred != y)])
    correct = math.fsum(mass[pred == y])
    disagree = math.fsum(mass[nonzero & (pred != truth_sign)])
    if abs(abstain + mistake + correct - 1.0) > 1e-9:
        raise AssertionError("abstain, mistake and correct rates do not sum to 1")
    return dict(abstain_rate=abstain, mistake_rate=mistake, correct_rate=correct, sign_disagreement_rate=disagree)


def _score(problem, counts, m, eta, delta, truth, mass) -> tuple[dict, np.ndarray]:
    errs_hat = problem.mistakes @ counts / m
    lhat = log_ratios(errs_hat, problem.matrix, eta, problem.space.prior)
    pred = predict_many(lhat, delta)
    row = _rates(problem, pred, np.sign(truth).astype(np.int8), mass)
    erm = int(np.argmin(problem.mistakes @ counts))
    row["erm_index"] = erm
    row["erm_error"] = float(problem.errors[erm])
    return row, lhat


def _base_bounds(problem: Problem, cfg: ExperimentConfig, eta: float, delta: float) -> list:
    k = len(problem.space)
    eps = float(problem.errors.min())
    out = []
    out.extend(bnd.mistake_and_abstain_summary(cfg.m, k, cfg.delta_conf, cfg.theta, eps))
    gamma = math.log(8 * k) / eta
    out.extend(bnd.best_hypothesis_bounds(eps, gamma, eta, delta, k))
    out.append(bnd.BoundReport("occam", dict(m=cfg.m, class_size=k, delta_conf=cfg.delta_conf, epsilon=eps),
                               bnd.occam_bound(cfg.m, k, cfg.delta_conf, eps), True))
    return out


def _binomial_margin(p: float, n: int) -> float:
    return 3.0 * math.sqrt(p * (1.0 - p) / n)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def run_concentration_experiment(cfg: ExperimentConfig, problem: Problem | None = None) -> TrialReport:
    """Frequency of the fixed-instance deviation event against its tail bound.

    For each lambda, a trial flags atom ``x`` and side ``s`` when
    ``s (l(x) - lhat(x)) >= 2 lambda + eta/(8m)``. The aggregate keeps the
    worst atom/side frequency over trials. Each trial also records the mass
    of deviating instances (test draws or exact), compared against
    ``sqrt(2) exp(-lambda^2 m)``.
    """
    problem = problem or load_problem(cfg)
    eta, delta = resolve_parameters(cfg, len(problem.space))
    truth = problem.true_log_ratios(eta)
    lams = [float(v) for v in cfg.lambdas]
    m = cfg.m

    def trial(i, rng):
        counts = _draw_counts(problem, rng, m)
        mass = _mass(problem, rng, cfg.test_points)
        row, lhat = _score(problem, counts, m, eta, delta, truth, mass)
        with np.errstate(invalid="ignore"):
            dev = np.where(np.isinf(truth), 0.0, truth - lhat)
        events = []
        for k, lam in enumerate(lams):
            thr = 2 * lam + eta / (8 * m)
            up, down = dev >= thr, -dev >= thr
            events.append((up, down))
            row[f"inner_prob_{k}"] = max(math.fsum(mass[up]), math.fsum(mass[down]))
        row["_events"] = events
        return row

    rows = run_trials(cfg, trial)
    per_lambda = []
    for k, lam in enumerate(lams):
        up = np.mean([r["_events"][k][0] for r in rows], axis=0)
        down = np.mean([r["_events"][k][1] for r in rows], axis=0)
        freq = float(max(up.max(), down.max()))
        bound = bnd.deviation_tail(lam, m)
        level = bnd.random_instance_tail(lam, m)
        inner_freq = float(np.mean([r[f"inner_prob_{k}"] >= level for r in rows]))
        per_lambda.append(dict(
            lam=lam, threshold=2 * lam + eta / (8 * m),
            deviation_freq_max=freq, deviation_bound=bound,
            deviation_ok=freq <= bound + _binomial_margin(freq, cfg.trials),
            random_instance_freq=inner_freq, random_instance_bound=level,
            random_instance_ok=inner_freq <= level + _binomial_margin(inner_freq, cfg.trials),
        ))
    for r in rows:
        del r["_events"]
    rows = [_with_ids(cfg, i, r) for i, r in enumerate(rows)]
    aggregate = dict(eta=eta, delta=delta, best_hypothesis_true_error=float(problem.errors.min()),
                     per_lambda=per_lambda, **_means(rows))
    reports = [bnd.BoundReport("deviation", dict(lam=d["lam"], m=m), d["deviation_bound"], True) for d in per_lambda]
    return _report(cfg, rows, aggregate, reports)


def run_abstention_experiment(cfg: ExperimentConfig, problem: Problem | None = None) -> TrialReport:
    """Fraction of trials whose disagreement with ``sign(l)`` exceeds ``delta_conf``."""
    problem = problem or load_problem(cfg)
    eta, delta = resolve_parameters(cfg, len(problem.space))
    truth = problem.true_log_ratios(eta)

    def trial(i, rng):
        counts = _draw_counts(problem, rng, cfg.m)
        mass = _mass(problem, rng, cfg.test_points)
        row, lhat = _score(problem, counts, cfg.m, eta, delta, truth, mass)
        seen = counts > 0
        row["off_sample_mass"] = math.fsum(problem.dist.p[~seen])
        row["off_sample_nonzero"] = int(np.count_nonzero(predict_many(lhat[~seen], delta)))
        row["violation"] = row["sign_disagreement_rate"] > cfg.delta_conf
        return row

    rows = [_with_ids(cfg, i, r) for i, r in enumerate(run_trials(cfg, trial))]
    frac = float(np.mean([r["violation"] for r in rows]))
    tol = cfg.delta_conf + _binomial_margin(cfg.delta_conf, cfg.trials)
    aggregate = dict(eta=eta, delta=delta, best_hypothesis_true_error=float(problem.errors.min()),
                     violation_fraction=frac, violation_bound=cfg.delta_conf,
                     violation_tolerance=tol, violation_ok=frac <= tol, **_means(rows))
    reports = [bnd.BoundReport("disagreement_confidence", dict(m=cfg.m, delta_conf=cfg.delta_conf, eta=eta),
                               cfg.delta_conf, True)]
    reports.extend(_base_bounds(problem, cfg, eta, delta))
    return _report(cfg, rows, aggregate, reports)


def run_comparison_experiment(cfg: ExperimentConfig, problem: Problem | None = None) -> TrialReport:
    """Averaged abstaining predictor against the empirical risk minimizer."""
    problem = problem or load_problem(cfg)
    eta, delta = resolve_parameters(cfg, len(problem.space))
    truth = problem.true_log_ratios(eta)
    reports = _base_bounds(problem, cfg, eta, delta)
    mistake_cap = reports[0].clamped

    def trial(i, rng):
        counts = _draw_counts(problem, rng, cfg.m)
        mass = _mass(problem, rng, cfg.test_points)
        row, _ = _score(problem, counts, cfg.m, eta, delta, truth, mass)
        row["within_mistake_bound"] = row["mistake_rate"] <= mistake_cap
        return row

    rows = [_with_ids(cfg, i, r) for i, r in enumerate(run_trials(cfg, trial))]
    y = problem.dist.y
    p = problem.dist.p
    sign_truth = np.sign(truth)
    best = float(problem.errors.min())
    aggregate = dict(
        eta=eta, delta=delta,
        best_hypothesis_true_error=best,
        mean_hypothesis_error=float(problem.errors.mean()),
        true_sign_error=math.fsum(p[sign_truth * y <= 0]),
        within_mistake_bound_fraction=float(np.mean([r["within_mistake_bound"] for r in rows])),
        **_means(rows),
    )
    diffs = np.array([r["erm_error"] - r["mistake_rate"] for r in rows])
    se = float(diffs.std(ddof=1) / math.sqrt(len(diffs))) if len(diffs) > 1 else math.nan
    aggregate["erm_minus_mistake"] = float(diffs.mean())
    aggregate["erm_minus_mistake_se"] = se
    if cfg.problem == "adversarial":
        eps = float(problem.meta.get("epsilon", 0.05))
        region = np.arange(len(p)) > 0
        margins = (y * truth)[region]
        target = -4.0 * delta
        aggregate.update(
            epsilon=eps,
            two_epsilon=2 * eps,
            hypothesis_error_target=2 * eps * (0.5 + eta * delta),
            region_mean_margin=float(margins.mean()),
            region_margin_target=target,
            region_margin_closed_form=math.log((0.5 - eta * delta) / (0.5 + eta * delta)) / eta,
            region_within_25pct=float(np.mean(np.abs(margins - target) <= 0.25 * abs(target))),
        )
    if cfg.problem == "favorable":
        k = len(problem.space) - 1
        aggregate.update(
            margin_closed_form=math.log(3 + 4 * math.exp(eta / 8) / k) / eta,
            margin_floor=math.log(3 - 12 * math.exp(1 / 8) / k) if eta == 1 else math.nan,
            true_sign_correct_all=bool(np.all(sign_truth * y > 0)),
        )
    return _report(cfg, rows, aggregate, reports)


def run_eta_uniformity_experiment(cfg: ExperimentConfig, problem: Problem | None = None) -> TrialReport:
    """Largest deviation of the empirical log partition from its exact mean over the eta grid.

    The subset is the hypotheses predicting +1 at instance ``params['x']``
    (default 0). Exact means come from multiset enumeration of all samples.
    Every trial also checks, on its realized errors, that the log partition
    is nonincreasing in eta while the log partition minus ``ln N / eta`` is
    nondecreasing.
    """
    problem = problem or load_problem(cfg)
    x = cfg.params.get("x", 0)
    subset = problem.space.predictions_at(x) == 1
    n = int(subset.sum())
    if n < 2:
        raise ValueError("the eta-uniformity experiment needs at least two hypotheses in the subset")
    lams = [float(v) for v in cfg.lambdas]
    grids = []
    for lam in lams:
        grid = eta_grid(n, lam)
        if not grid:
            raise ValueError(f"lambda={lam} is too coarse: the eta grid for N={n} is empty")
        grids.append(grid)
    counts_all, prob = multiset_counts(problem.dist, cfg.m, DEFAULT_BUDGET)
    means = [[math.fsum(prob * empirical_log_partitions(problem.space, problem.dist, counts_all, cfg.m, e, subset))
              for e in grid] for grid in grids]
    weights = problem.space.prior[subset]
    dense = np.geomspace(1.0, 1e4, 41)
    log_n = math.log(n)

    def trial(i, rng):
        counts = _draw_counts(problem, rng, cfg.m)
        errs = (problem.mistakes[subset] @ counts) / cfg.m
        row = {}
        for k, (grid, mu) in enumerate(zip(grids, means)):
            sup = max(abs(log_partition(errs, weights, e) - mu_e) for e, mu_e in zip(grid, mu))
            row[f"sup_dev_{k}"] = sup
        F = np.array([log_partition(errs, np.ones(n), e) for e in dense])
        G = F - log_n / dense
        row["monotonicity_violations"] = int(np.count_nonzero(np.diff(F) > 1e-12) + np.count_nonzero(np.diff(G) < -1e-12))
        return row

    rows = [_with_ids(cfg, i, r) for i, r in enumerate(run_trials(cfg, trial))]
    per_lambda = []
    reports = []
    for k, lam in enumerate(lams):
        freq = float(np.mean([r[f"sup_dev_{k}"] >= lam for r in rows]))
        tail = bnd.uniform_eta_tail(n, lam, cfg.m)
        per_lambda.append(dict(lam=lam, grid_size=len(grids[k]), frequency=freq, bound=tail,
                               ok=freq <= tail + _binomial_margin(freq, cfg.trials)))
        reports.append(bnd.BoundReport("uniform-eta", dict(class_size=n, lam=lam, m=cfg.m), tail, True))
    aggregate = dict(subset_size=n, per_lambda=per_lambda,
                     monotonicity_violations=int(sum(r["monotonicity_violations"] for r in rows)))
    return _report(cfg, rows, aggregate, reports)


def _with_ids(cfg: ExperimentConfig, i: int, row: dict) -> dict:
    return {"trial": i, "seed": trial_seed(cfg.master_seed, i), **row}


_RATE_KEYS = ("abstain_rate", "mistake_rate", "correct_rate", "sign_disagreement_rate", "erm_error")


def _means(rows: list) -> dict:
    return {f"mean_{k}": float(np.mean([r[k] for r in rows])) for k in _RATE_KEYS if k in rows[0]}


def _report(cfg: ExperimentConfig, rows, aggregate, reports) -> TrialReport:
    return TrialReport(cfg.scenario, cfg.as_dict(), rows, aggregate, reports, [r["seed"] for r in rows])


RUNNERS = {
    "concentration": run_concentration_experiment,
    "abstention": run_abstention_experiment,
    "lookup": run_abstention_experiment,
    "adversarial": run_comparison_experiment,
    "favorable": run_comparison_experiment,
    "stumps": run_comparison_experiment,
    "eta_uniformity": run_eta_uniformity_experiment,
}


def run_experiment(cfg: ExperimentConfig) -> TrialReport:
    return RUNNERS[cfg.scenario](cfg)
