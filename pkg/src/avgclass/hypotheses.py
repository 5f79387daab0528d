"""Instances, samples, finite hypothesis spaces and error evaluation.

Instances are plain numpy arrays. Coordinate families (stumps, rectangles)
take a float array of shape ``(n, k)``; table families (lookup tables and
the explicit constructions used by the experiments) take integer indices
into a finite domain, shape ``(n,)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

MAX_LOOKUP_DOMAIN = 20
PRIOR_TOL = 1e-9
PROB_TOL = 1e-12


def as_points(instances) -> np.ndarray:
    """Coerce instances to a 2-D float array, one row per instance."""
    arr = np.asarray(instances, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def as_indices(instances) -> np.ndarray:
    """Coerce instances to a 1-D integer index array."""
    arr = np.asarray(instances)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = np.atleast_1d(arr)
    if arr.dtype.kind == "f":
        if not np.all(arr == np.round(arr)):
            raise ValueError("table hypotheses need integer instance indices")
    return arr.astype(np.int64)


def _check_labels(y: np.ndarray) -> None:
    if not np.all((y == 1) | (y == -1)):
        bad = np.flatnonzero((y != 1) & (y != -1))[0]
        raise ValueError(f"label at position {bad} is {y[bad]!r}; labels must be -1 or +1")


class LabeledExample(NamedTuple):
    instance: object
    label: int


@dataclass(frozen=True)
class Sample:
    """An ordered i.i.d. sample of labeled examples."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y).astype(np.int8)
        if y.ndim != 1 or y.size == 0:
            raise ValueError("a sample needs at least one example")
        _check_labels(y)
        X = np.asarray(self.X)
        if len(X) != len(y):
            raise ValueError(f"{len(X)} instances but {len(y)} labels")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_examples(cls, examples: Sequence[LabeledExample]) -> "Sample":
        return cls(np.asarray([e.instance for e in examples]), np.asarray([e.label for e in examples]))

    @property
    def m(self) -> int:
        return len(self.y)

    def __len__(self) -> int:
        return self.m

    def examples(self) -> list[LabeledExample]:
        return [LabeledExample(x, int(label)) for x, label in zip(self.X, self.y)]


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    sign: int

    def predict(self, instances) -> np.ndarray:
        return np.full(len(np.atleast_1d(np.asarray(instances))), self.sign, dtype=np.int8)

    def __call__(self, x) -> int:
        return int(self.sign)


@dataclass(frozen=True)
class Stump:
    """Predicts ``sign`` when ``x[feature] > cut`` and ``-sign`` otherwise."""

    cut: float
    sign: int = 1
    feature: int = 0

    def predict(self, instances) -> np.ndarray:
        x = as_points(instances)[:, self.feature]
        return np.where(x > self.cut, self.sign, -self.sign).astype(np.int8)

    def __call__(self, x) -> int:
        return int(self.predict([np.atleast_1d(x)])[0])


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned closed box in the plane labelled ``inside``; ``-inside`` elsewhere."""

    x0: float
    x1: float
    y0: float
    y1: float
    inside: int = 1

    def predict(self, instances) -> np.ndarray:
        pts = as_points(instances)
        hit = (pts[:, 0] >= self.x0) & (pts[:, 0] <= self.x1) & (pts[:, 1] >= self.y0) & (pts[:, 1] <= self.y1)
        return np.where(hit, self.inside, -self.inside).astype(np.int8)

    def __call__(self, x) -> int:
        return int(self.predict([x])[0])


@dataclass(frozen=True, eq=False)
class LookupTable:
    """Hypothesis over a finite domain given by its full table of outputs."""

    table: np.ndarray

    def predict(self, instances) -> np.ndarray:
        return self.table[as_indices(instances)]

    def __call__(self, x) -> int:
        return int(self.table[int(x)])


def _uniform_or_checked(prior, n: int) -> np.ndarray:
    if prior is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(prior, dtype=float)
    if w.shape != (n,):
        raise ValueError(f"prior has {w.size} weights for {n} hypotheses")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("prior weights must be finite and nonnegative")
    if abs(math.fsum(w) - 1.0) > PRIOR_TOL:
        raise ValueError(f"prior weights sum to {math.fsum(w)!r}, expected 1")
    return w


class HypothesisSpace:
    """A finite, indexed set of +-1 predictors with prior weights.

    Index order is the canonical tie-break key (ERM picks the lowest index).
    """

    def __init__(self, hypotheses: Sequence, prior=None):
        hypotheses = tuple(hypotheses)
        if not hypotheses:
            raise ValueError("a hypothesis space needs at least one hypothesis")
        self._hypotheses = hypotheses
        self.prior = _uniform_or_checked(prior, len(hypotheses))
        self.prior.flags.writeable = False

    def __len__(self) -> int:
        return len(self._hypotheses)

    def __getitem__(self, i: int):
        return self._hypotheses[i]

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def _raw_matrix(self, instances) -> np.ndarray:
        return np.stack([np.asarray(h.predict(instances)) for h in self._hypotheses])

    def prediction_matrix(self, instances) -> np.ndarray:
        """Entry ``(i, j)`` is hypothesis ``i`` applied to instance ``j``."""
        if len(np.atleast_1d(np.asarray(instances))) == 0:
            raise ValueError("instances must be nonempty")
        M = np.asarray(self._raw_matrix(instances)).astype(np.int8)
        if not np.all((M == 1) | (M == -1)):
            raise ValueError("hypotheses must output only -1 or +1")
        return M

    def predictions_at(self, x) -> np.ndarray:
        """Every hypothesis's prediction at the single instance ``x``."""
        return self.prediction_matrix(np.atleast_1d(np.asarray(x, dtype=float))[None, :])[:, 0]

    def with_prior(self, prior) -> "HypothesisSpace":
        return HypothesisSpace(self._hypotheses, prior)


class TableSpace(HypothesisSpace):
    """Hypothesis space over the finite domain ``{0, ..., n-1}`` stored as a table.

    ``table[i, j]`` is the prediction of hypothesis ``i`` on instance ``j``.
    """

    def __init__(self, table, prior=None):
        table = np.ascontiguousarray(table, dtype=np.int8)
        if table.ndim != 2 or table.shape[0] == 0:
            raise ValueError("table must be a nonempty 2-D array")
        if not np.all((table == 1) | (table == -1)):
            raise ValueError("hypotheses must output only -1 or +1")
        table.flags.writeable = False
        self.table = table
        self.prior = _uniform_or_checked(prior, table.shape[0])
        self.prior.flags.writeable = False

    def __len__(self) -> int:
        return self.table.shape[0]

    def __getitem__(self, i: int) -> LookupTable:
        return LookupTable(self.table[i])

    @property
    def domain_size(self) -> int:
        return self.table.shape[1]

    def _raw_matrix(self, instances) -> np.ndarray:
        idx = as_indices(instances)
        if idx.size and (idx.min() < 0 or idx.max() >= self.domain_size):
            raise ValueError(f"instance index outside domain of size {self.domain_size}")
        return self.table[:, idx]

    def predictions_at(self, x) -> np.ndarray:
        return self.prediction_matrix(np.atleast_1d(x))[:, 0]

    def with_prior(self, prior) -> "TableSpace":
        return TableSpace(self.table, prior)


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------


def constant_space(prior=None) -> HypothesisSpace:
    return HypothesisSpace([Constant(1), Constant(-1)], prior)


def stump_space(cuts, feature: int = 0, prior=None) -> HypothesisSpace:
    """Threshold stumps on one feature, both orientations per cut.

    Ordering is ``(cut_0, +1), (cut_0, -1), (cut_1, +1), ...``.
    """
    cuts = [float(c) for c in cuts]
    if not cuts:
        raise ValueError("need at least one cut point")
    hyps = [Stump(c, s, feature) for c in cuts for s in (1, -1)]
    return HypothesisSpace(hyps, prior)


def rectangle_space(x_grid, y_grid, prior=None) -> HypothesisSpace:
    """All closed axis-aligned rectangles with corners on a 2-D grid, both inside labels."""
    xs = sorted(float(v) for v in x_grid)
    ys = sorted(float(v) for v in y_grid)
    hyps = [
        Rectangle(x0, x1, y0, y1, inside)
        for x0, x1 in itertools.combinations_with_replacement(xs, 2)
        for y0, y1 in itertools.combinations_with_replacement(ys, 2)
        for inside in (1, -1)
    ]
    return HypothesisSpace(hyps, prior)


def lookup_table_space(domain_size: int, prior=None) -> TableSpace:
    """Every binary function on ``{0, ..., n-1}``.

    Hypothesis ``i`` reads its output on instance ``j`` from bit ``n-1-j`` of
    ``i``: a clear bit means +1.
    """
    n = int(domain_size)
    if n < 1:
        raise ValueError("domain size must be positive")
    if n > MAX_LOOKUP_DOMAIN:
        raise ValueError(f"lookup-table domain of size {n} exceeds the cap of {MAX_LOOKUP_DOMAIN}")
    idx = np.arange(2**n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]
    bits = (idx >> shifts) & 1
    return TableSpace(1 - 2 * bits.astype(np.int8), prior)


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteJointDistribution:
    """Explicit probability table over distinct ``(instance, label)`` atoms."""

    X: np.ndarray
    y: np.ndarray
    p: np.ndarray
    _keys: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        y = np.asarray(self.y).astype(np.int8)
        p = np.asarray(self.p, dtype=float)
        X = np.asarray(self.X)
        if not (len(X) == len(y) == len(p)) or len(p) == 0:
            raise ValueError("atoms need matching, nonempty instance/label/probability lists")
        _check_labels(y)
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("atom probabilities must be finite and nonnegative")
        total = math.fsum(p)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"atom probabilities sum to {total!r}, expected 1")
        keys = tuple((np.atleast_1d(x).tobytes(), int(lab)) for x, lab in zip(X, y))
        if len(set(keys)) != len(keys):
            raise ValueError("atoms must be distinct (instance, label) pairs")
        for name, arr in (("X", X), ("y", y), ("p", p)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_keys", keys)

    def __len__(self) -> int:
        return len(self.p)

    def draw_indices(self, rng: np.random.Generator, m: int) -> np.ndarray:
        """Indices of ``m`` i.i.d. atom draws."""
        cdf = np.cumsum(self.p)
        cdf[-1] = 1.0
        return np.searchsorted(cdf, rng.random(m), side="right")

    def draw(self, rng: np.random.Generator, m: int) -> Sample:
        idx = self.draw_indices(rng, m)
        return Sample(self.X[idx], self.y[idx])


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


def _predict_one(h, instances) -> np.ndarray:
    if hasattr(h, "predict"):
        return np.asarray(h.predict(instances))
    return np.array([h(x) for x in instances])


def empirical_error(h, sample: Sample) -> float:
    """Fraction of ``sample`` misclassified by ``h``; an exact multiple of ``1/m``."""
    wrong = int(np.count_nonzero(_predict_one(h, sample.X) != sample.y))
    return wrong / sample.m


def true_error(h, dist: DiscreteJointDistribution) -> float:
    wrong = _predict_one(h, dist.X) != dist.y
    return math.fsum(dist.p[wrong])


def mistake_counts(space: HypothesisSpace, sample: Sample) -> np.ndarray:
    M = space.prediction_matrix(sample.X)
    return np.count_nonzero(M != sample.y[None, :], axis=1)


def empirical_errors(space: HypothesisSpace, sample: Sample) -> np.ndarray:
    return mistake_counts(space, sample) / sample.m


def true_errors(space: HypothesisSpace, dist: DiscreteJointDistribution) -> np.ndarray:
    wrong = space.prediction_matrix(dist.X) != dist.y[None, :]
    return np.array([math.fsum(dist.p[row]) for row in wrong])

