import math

import numpy as np
import pytest

from avgclass.core import (
    LogRatioResult,
    WeightConfig,
    abstention_threshold,
    empirical_log_ratio,
    erm_predict,
    eta_grid,
    log_partition,
    log_ratio,
    log_ratios,
    nearest_grid_eta,
    predict,
    predict_many,
    schedule_params,
    true_log_ratio,
    uniform_abstention_threshold,
)
from avgclass.hypotheses import (
    Constant,
    DiscreteJointDistribution,
    HypothesisSpace,
    Sample,
    TableSpace,
    lookup_table_space,
)

# Reference values evaluated at 50 significant digits with mpmath.
LOG_PARTITION_TWO_TERMS = 0.15663084375911141702
ABSTENTION_M100 = 0.37813948713638485510
SCHEDULE_ETA = 66.846117276679272963
SCHEDULE_DELTA = 0.037399525179596976422
UNIFORM_WIDTH = 1.0299102130973761463
GRID_FIRST = 11.090354888959124951
GRID_LAST = 1.0082140808144659046


class TestLogPartition:
    def test_two_terms(self):
        assert log_partition([0, 0.5], [1, 1], 2) == pytest.approx(LOG_PARTITION_TWO_TERMS, abs=1e-15)

    @pytest.mark.parametrize("eta", [1e-3, 1.0, 77.0, 1e8])
    def test_single_term_identity(self, eta):
        assert log_partition([0.3], [1.0], eta) == pytest.approx(-0.3, rel=1e-12)

    def test_no_weight_is_minus_inf(self):
        assert log_partition([0.1, 0.2], [0, 0], 1.0) == -math.inf
        assert log_partition([], [], 1.0) == -math.inf

    def test_huge_eta_finite(self):
        v = log_partition([0.2, 0.9, 0.95], [1, 1, 1], 1e9)
        assert v == pytest.approx(-0.2, abs=1e-8)

    def test_zero_weights_skipped(self):
        assert log_partition([0.0, 0.7], [0.0, 1.0], 3.0) == pytest.approx(-0.7)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            log_partition([0.1], [1.0], 0.0)
        with pytest.raises(ValueError):
            log_partition([0.1, 0.2], [1.0], 1.0)
        with pytest.raises(ValueError):
            log_partition([0.1], [-1.0], 1.0)


class TestLogRatio:
    def test_two_hypothesis_closed_form(self):
        r = log_ratio([0.2, 0.5], [1, -1], 7.3, [0.5, 0.5])
        assert r.value == pytest.approx(0.3, abs=1e-14)
        assert isinstance(r, LogRatioResult) and float(r) == r.value

    def test_equal_errors_count_ratio(self):
        errs = np.full(5, 0.25)
        preds = np.array([1, 1, 1, -1, -1])
        assert log_ratio(errs, preds, 2.0).value == pytest.approx(math.log(3 / 2) / 2)

    def test_one_sided_infinite(self):
        assert log_ratio([0.1], [1], 1.0).value == math.inf
        assert log_ratio([0.1, 0.3], [-1, -1], 1.0).value == -math.inf

    def test_both_sides_empty(self):
        with pytest.raises(ValueError):
            log_ratio([0.1, 0.2], [1, -1], 1.0, [0.0, 0.0])

    def test_vector_matches_scalar(self, rng):
        errs = rng.random(9)
        M = rng.choice([-1, 1], size=(9, 6))
        w = rng.dirichlet(np.ones(9))
        vec = log_ratios(errs, M, 3.0, w)
        ref = [log_ratio(errs, M[:, j], 3.0, w).value for j in range(6)]
        np.testing.assert_array_equal(vec, ref)

    def test_lookup_off_sample_exactly_zero(self):
        space = lookup_table_space(6)
        sample = Sample(np.array([[0], [2], [2], [5]]), np.array([1, -1, 1, 1]))
        for x in (1, 3, 4):
            assert empirical_log_ratio(space, sample, 4.0, x).value == 0.0

    def test_lookup_on_sample_closed_form(self):
        space = lookup_table_space(5)
        sample = Sample(np.array([[0], [0], [1], [3], [3], [3]]), np.array([1, 1, -1, 1, -1, -1]))
        m = sample.m
        for x, expected in ((0, 2 / m), (1, -1 / m), (3, -1 / m)):
            assert empirical_log_ratio(space, sample, 2.5, x).value == pytest.approx(expected, abs=1e-12)

    def test_true_ratio_uses_true_errors(self):
        space = HypothesisSpace([Constant(1), Constant(-1)])
        d = DiscreteJointDistribution(np.array([[0.0], [0.0]]), np.array([1, -1]), np.array([0.7, 0.3]))
        assert true_log_ratio(space, d, 5.0, [0.0]).value == pytest.approx(0.7 - 0.3)

    def test_prior_weighting(self):
        space = TableSpace(np.array([[1], [-1]]), [0.8, 0.2])
        sample = Sample(np.array([[0]]), np.array([1]))
        # equal log prior shift: ln(0.8/0.2)/eta plus error gap 1
        expected = math.log(4.0) / 2.0 + 1.0
        assert empirical_log_ratio(space, sample, 2.0, 0).value == pytest.approx(expected)


class TestPredict:
    @pytest.mark.parametrize("value,delta,label", [(0.3, 0.1, 1), (-0.05, 0.1, 0), (0.0, 0.0, 0),
                                                   (-0.3, 0.1, -1), (0.1, 0.1, 0), (math.inf, 5, 1),
                                                   (-math.inf, 5, -1)])
    def test_thresholding(self, value, delta, label):
        assert predict(value, delta) == label
        assert predict_many([value], delta)[0] == label

    def test_accepts_result(self):
        assert predict(LogRatioResult(0.5, 0.0, -0.5), 0.2) == 1

    def test_weight_config_validation(self):
        with pytest.raises(ValueError):
            WeightConfig(eta=0.0)
        with pytest.raises(ValueError):
            WeightConfig(eta=1.0, delta=-0.1)


class TestErm:
    def _space(self):
        return TableSpace(np.array([[1, 1], [1, -1], [-1, -1]]))

    def test_lowest_error_wins(self):
        s = Sample(np.array([[0], [1]]), np.array([1, -1]))
        assert erm_predict(self._space(), s, 1) == (-1, 1)

    def test_tie_goes_to_lowest_index(self):
        s = Sample(np.array([[0], [1]]), np.array([1, 1]))
        assert erm_predict(TableSpace(np.array([[1, -1], [-1, 1], [1, 1]])), s, 0)[1] == 2
        s2 = Sample(np.array([[0]]), np.array([1]))
        assert erm_predict(TableSpace(np.array([[1, -1], [1, 1]])), s2, 1) == (-1, 0)

    def test_lookup_finds_consistent_table(self):
        space = lookup_table_space(5)
        s = Sample(np.array([[0], [1], [4]]), np.array([-1, 1, -1]))
        _, idx = erm_predict(space, s, 0)
        np.testing.assert_array_equal(space.prediction_matrix([0, 1, 4])[idx], [-1, 1, -1])


class TestParameterSettings:
    def test_abstention_threshold(self):
        assert abstention_threshold(100, 0.05, 10) == pytest.approx(ABSTENTION_M100, rel=1e-14)

    def test_abstention_threshold_unit_log(self):
        assert abstention_threshold(1, math.sqrt(2) / math.e, 8) == pytest.approx(3.0, rel=1e-14)

    def test_abstention_threshold_vanishes(self):
        assert abstention_threshold(10**12, 0.05, 1.0) < 1e-5

    def test_abstention_threshold_domain(self):
        with pytest.raises(ValueError):
            abstention_threshold(10, 1.5, 1.0)
        with pytest.raises(ValueError):
            abstention_threshold(0, 0.1, 1.0)

    def test_schedule(self):
        eta, delta = schedule_params(10000, 100, 0.05, 0.25)
        assert eta == pytest.approx(SCHEDULE_ETA, rel=1e-14)
        assert delta == pytest.approx(SCHEDULE_DELTA, rel=1e-13)

    def test_schedule_width_is_threshold_at_eta(self):
        eta, delta = schedule_params(500, 40, 0.1, 0.3)
        assert delta == pytest.approx(abstention_threshold(500, 0.1, eta), rel=1e-13)

    def test_schedule_small_theta_limit(self):
        eta, _ = schedule_params(400, 10, 0.1, 1e-12)
        assert eta == pytest.approx(math.log(80) * 20, rel=1e-9)

    @pytest.mark.parametrize("theta", [0.0, 0.5, 0.7, -0.1])
    def test_schedule_theta_range(self, theta):
        with pytest.raises(ValueError, match=r"\(0, 1/2\)"):
            schedule_params(100, 10, 0.1, theta)

    def test_uniform_threshold(self):
        assert uniform_abstention_threshold(100, 16, 0.1, 1.0) == pytest.approx(UNIFORM_WIDTH, rel=1e-14)

    def test_uniform_threshold_domain(self):
        with pytest.raises(ValueError):
            uniform_abstention_threshold(100, 1, 0.1, 1.0)
        with pytest.raises(ValueError):
            uniform_abstention_threshold(100, 16, 0.1, 0.5)


class TestEtaGrid:
    def test_sixteen(self):
        g = eta_grid(16, 1.0)
        assert len(g) == 11
        assert g[0] == pytest.approx(GRID_FIRST, rel=1e-14)
        assert g[-1] == pytest.approx(GRID_LAST, rel=1e-14)
        assert all(a > b for a, b in zip(g, g[1:]))

    def test_boundary_single_element(self):
        assert eta_grid(math.e, 4.0) == [pytest.approx(1.0)]

    def test_coarse_lambda_empty(self):
        assert eta_grid(16, 4 * math.log(16) + 0.01) == []

    def test_nearest_grid_eta(self):
        g = eta_grid(16, 1.0)
        assert nearest_grid_eta(g, 2.0) == pytest.approx(4 * math.log(16) / 5)
        assert nearest_grid_eta(g, 100.0) == g[0]
