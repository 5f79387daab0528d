import itertools
import math

import numpy as np
import pytest

from avgclass.core import empirical_log_ratio, log_partition, true_log_ratio
from avgclass.hypotheses import DiscreteJointDistribution, Sample, TableSpace, lookup_table_space
from avgclass.oracle import (
    BudgetExceeded,
    deviation_distribution,
    enumerate_samples,
    exact_deviation_probability,
    exact_expected_log_partition,
    multiset_counts,
    naive_log_ratio,
    ordered_counts,
    ordered_tuples,
    true_log_partition,
)

from conftest import random_table_problem


def brute_expected_log_partition(table, X, y, p, m, eta, rows):
    """Independent reference: loop over ordered samples with plain Python floats."""
    total = 0.0
    for tup in itertools.product(range(len(p)), repeat=m):
        prob = math.prod(p[a] for a in tup)
        acc = 0.0
        for h in rows:
            err = sum(table[h][X[a]] != y[a] for a in tup) / m
            acc += math.exp(-eta * err) / len(table)
        total += prob * math.log(acc) / eta
    return total


class TestEnumeration:
    def test_two_atoms_m3(self, two_point_dist):
        idx, prob = ordered_tuples(two_point_dist, 3)
        assert idx.shape == (8, 3)
        assert math.fsum(prob) == pytest.approx(1.0, abs=1e-15)

    def test_single_atom(self):
        d = DiscreteJointDistribution(np.array([0]), np.array([1]), np.array([1.0]))
        samples = list(enumerate_samples(d, 5))
        assert len(samples) == 1 and samples[0][1] == 1.0

    def test_hand_products(self, two_point_dist):
        _, prob = ordered_tuples(two_point_dist, 2)
        np.testing.assert_allclose(prob, [0.0625, 0.1875, 0.1875, 0.5625], rtol=1e-15)

    def test_multiset_matches_ordered(self, rng):
        for _ in range(10):
            _, dist = random_table_problem(rng)
            m = int(rng.integers(1, 5))
            c1, p1 = ordered_counts(dist, m)
            c2, p2 = multiset_counts(dist, m)
            agg = {}
            for c, pr in zip(map(tuple, c1), p1):
                agg.setdefault(c, []).append(pr)
            assert len(agg) == len(c2)
            for c, pr in zip(map(tuple, c2), p2):
                assert math.fsum(agg[c]) == pytest.approx(pr, rel=1e-12, abs=1e-300)

    def test_budget(self, two_point_dist):
        with pytest.raises(BudgetExceeded):
            ordered_tuples(two_point_dist, 30)


class TestExpectedLogPartition:
    def test_two_hypotheses_two_atoms(self, two_point_dist):
        table = np.array([[1, -1], [1, 1]])
        space = TableSpace(table)
        exact = exact_expected_log_partition(space, two_point_dist, 2, 1.0)
        ref = brute_expected_log_partition(table, [0, 1], [1, -1], [0.25, 0.75], 2, 1.0, [0, 1])
        assert exact == pytest.approx(ref, abs=1e-14)
        r = true_log_partition(space, two_point_dist, 1.0)
        assert r <= exact + 1e-12 <= r + 1 / 16 + 2e-12

    def test_matches_brute_force(self, rng):
        for _ in range(15):
            space, dist = random_table_problem(rng)
            m = int(rng.integers(1, 4))
            eta = float(rng.choice([0.5, 2.0, 9.0]))
            rows = list(range(len(space)))
            ref = brute_expected_log_partition(space.table, list(dist.X), list(dist.y), list(dist.p), m, eta, rows)
            for method in ("ordered", "multiset"):
                got = exact_expected_log_partition(space, dist, m, eta, method=method)
                assert got == pytest.approx(ref, abs=1e-12)

    def test_subset_by_side(self, two_point_dist):
        space = lookup_table_space(2)
        plus = exact_expected_log_partition(space, two_point_dist, 2, 3.0, x=0, side=1)
        ref = brute_expected_log_partition(space.table, [0, 1], [1, -1], [0.25, 0.75], 2, 3.0, [0, 1])
        assert plus == pytest.approx(ref, abs=1e-14)

    def test_bad_side(self, two_point_dist):
        with pytest.raises(ValueError):
            exact_expected_log_partition(lookup_table_space(2), two_point_dist, 2, 1.0, x=0, side=0)


class TestDeviationProbability:
    def test_infinite_threshold(self, two_point_dist):
        assert exact_deviation_probability(lookup_table_space(2), two_point_dist, 3, 1.0, 0, math.inf) == 0.0

    def test_deterministic_distribution(self):
        d = DiscreteJointDistribution(np.array([1]), np.array([-1]), np.array([1.0]))
        space = lookup_table_space(2)
        for x in (0, 1):
            for s in (1, -1):
                assert exact_deviation_probability(space, d, 4, 2.0, x, 1e-12, s) == 0.0

    def test_distribution_matches_per_sample(self, rng):
        space, dist = random_table_problem(rng)
        dev, prob = deviation_distribution(space, dist, 3, 2.0, 0)
        truth_val = true_log_ratio(space, dist, 2.0, 0).value
        for (sample, pr), d, q in zip(enumerate_samples(dist, 3), dev, prob):
            assert pr == pytest.approx(q)
            lhat = empirical_log_ratio(space, sample, 2.0, 0).value
            if math.isinf(truth_val):
                assert d == 0.0
            else:
                assert d == pytest.approx(truth_val - lhat, abs=1e-12)

    def test_probabilities_complement(self, rng):
        space, dist = random_table_problem(rng)
        up = exact_deviation_probability(space, dist, 3, 1.0, 0, -math.inf)
        assert up == pytest.approx(1.0)


class TestNaive:
    def test_agrees_with_core(self, rng):
        for _ in range(50):
            table = rng.choice([-1, 1], size=(3, 4))
            space = TableSpace(table)
            idx = rng.integers(0, 4, size=6)
            sample = Sample(idx, rng.choice([-1, 1], size=6))
            x = int(rng.integers(0, 4))
            naive = naive_log_ratio(space, sample, 1.0, x)
            core = empirical_log_ratio(space, sample, 1.0, x).value
            if math.isinf(core):
                assert naive == core
            else:
                assert abs(naive - core) <= 1e-10

    def test_guard(self):
        space = TableSpace(np.array([[1, 1], [-1, -1]]))
        sample = Sample(np.array([0]), np.array([1]))
        with pytest.raises(ValueError, match="guard"):
            naive_log_ratio(space, sample, 1e6, 0)
        assert log_partition([1.0, 0.0], [0.5, 0.5], 1e6) == pytest.approx(math.log(1 / 2) / 1e6)
