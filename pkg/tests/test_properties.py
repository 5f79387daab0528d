import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from avgclass.core import log_partition, log_ratio, predict_many
from avgclass.oracle import exact_expected_log_partition, true_log_partition

from conftest import random_table_problem

n_hyp = st.integers(1, 12)
etas = st.floats(1e-3, 1e4)


@st.composite
def errors_and_predictions(draw):
    n = draw(st.integers(2, 12))
    errs = draw(arrays(float, n, elements=st.floats(0, 1)))
    preds = draw(arrays(np.int8, n, elements=st.sampled_from([-1, 1])))
    assume(np.any(preds == 1) and np.any(preds == -1))
    w = draw(arrays(float, n, elements=st.floats(1e-3, 1.0)))
    return errs, preds, w


@given(errors_and_predictions(), etas)
def test_flipping_predictions_negates(data, eta):
    errs, preds, w = data
    a = log_ratio(errs, preds, eta, w).value
    b = log_ratio(errs, -preds, eta, w).value
    assert math.isclose(a, -b, rel_tol=1e-12, abs_tol=1e-12)


@given(errors_and_predictions(), etas, st.floats(-0.5, 0.5), st.floats(1e-3, 1e3))
def test_common_shift_and_scale_cancel(data, eta, shift, scale):
    errs, preds, w = data
    a = log_ratio(errs, preds, eta, w).value
    b = log_ratio(errs + shift, preds, eta, w * scale).value
    assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9 + 1e-12 * (1 + 1 / eta))


@given(errors_and_predictions(), etas)
def test_ratio_between_error_gaps(data, eta):
    errs, preds, w = data
    w = w / w.sum()
    v = log_ratio(errs, preds, eta, w).value
    plus, minus = preds == 1, preds == -1
    lo = errs[minus].min() - errs[plus].min() + math.log(w[plus].min()) / eta
    hi = errs[minus].min() - errs[plus].min() - math.log(w[minus].min()) / eta
    assert lo - 1e-9 <= v <= hi + 1e-9


@given(arrays(float, st.integers(1, 12), elements=st.floats(0, 1)), st.floats(0.01, 100), st.floats(1.0, 50.0))
def test_log_partition_monotone_in_eta(errs, eta, factor):
    n = len(errs)
    w = np.ones(n)
    f1, f2 = log_partition(errs, w, eta), log_partition(errs, w, eta * factor)
    assert f2 <= f1 + 1e-12
    g1, g2 = f1 - math.log(n) / eta, f2 - math.log(n) / (eta * factor)
    assert g2 >= g1 - 1e-12


@given(arrays(float, st.integers(1, 12), elements=st.floats(0, 1)), etas)
def test_log_partition_soft_min_bounds(errs, eta):
    n = len(errs)
    v = log_partition(errs, np.full(n, 1.0 / n), eta)
    assert -errs.min() - math.log(n) / eta - 1e-12 <= v <= -errs.min() + 1e-12


@given(arrays(float, st.integers(1, 30), elements=st.floats(-5, 5)), st.floats(0, 3), st.floats(0, 3))
def test_abstention_monotone_in_width(values, d1, d2):
    lo, hi = sorted((d1, d2))
    a, b = predict_many(values, lo), predict_many(values, hi)
    assert np.all(np.abs(b) <= np.abs(a))
    assert np.all((b == 0) | (b == a))


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), etas)
def test_bounded_difference(seed, m, eta):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 10))
    mist = rng.integers(0, 2, size=(n, m))
    changed = mist.copy()
    j = int(rng.integers(0, m))
    changed[:, j] = rng.integers(0, 2, size=n)
    w = np.ones(n) / n
    a = log_partition(mist.sum(1) / m, w, eta)
    b = log_partition(changed.sum(1) / m, w, eta)
    assert abs(a - b) <= 1.0 / m + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.sampled_from([0.5, 1.0, 4.0, 16.0]))
def test_expected_log_partition_sandwich(seed, m, eta):
    rng = np.random.default_rng(seed)
    space, dist = random_table_problem(rng)
    subset = rng.random(len(space)) < 0.7
    assume(subset.any())
    exact = exact_expected_log_partition(space, dist, m, eta, subset=subset)
    truth = true_log_partition(space, dist, eta, subset)
    slack = exact - truth
    assert -1e-9 <= slack <= eta / (8 * m) + 1e-9
