"""Exponentially weighted averaged classifier with abstention, bounds and exact oracles."""

from .bounds import (
    BoundReport,
    best_hypothesis_bounds,
    deviation_tail,
    mistake_and_abstain_summary,
    occam_bound,
    random_instance_tail,
    schedule_bounds,
    uniform_eta_tail,
    volume_bounds,
)
from .core import (
    LogRatioResult,
    WeightConfig,
    abstention_threshold,
    empirical_log_ratio,
    erm_predict,
    eta_grid,
    log_partition,
    log_ratio,
    log_ratios,
    predict,
    predict_many,
    schedule_params,
    true_log_ratio,
    uniform_abstention_threshold,
)
from .experiments import ExperimentConfig, TrialReport, run_experiment
from .hypotheses import (
    Constant,
    DiscreteJointDistribution,
    HypothesisSpace,
    LookupTable,
    Rectangle,
    Sample,
    Stump,
    TableSpace,
    constant_space,
    empirical_error,
    lookup_table_space,
    rectangle_space,
    stump_space,
    true_error,
)

__version__ = "0.1.0"
