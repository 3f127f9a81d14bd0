from .cv import CVResult, FoldPlan, cross_validate, cross_validate_matrix, fold_seed, stratified_folds
from .experiments import SensitivityRow, min_posts_sensitivity, spread_subsample, threshold_rule_sweep
from .infogain import RankedFeature, entropy, info_gain, info_gain_ranking, mdl_discretize, rank_matrix
from .metrics import (
    ConfusionCounts,
    CurveSeries,
    MetricsBundle,
    confusion_counts,
    metrics_from_scores,
    pr_curve,
    roc_curve,
    summary_metrics,
)

__all__ = [
    "CVResult",
    "ConfusionCounts",
    "CurveSeries",
    "FoldPlan",
    "MetricsBundle",
    "RankedFeature",
    "SensitivityRow",
    "confusion_counts",
    "cross_validate",
    "cross_validate_matrix",
    "entropy",
    "fold_seed",
    "info_gain",
    "info_gain_ranking",
    "mdl_discretize",
    "metrics_from_scores",
    "min_posts_sensitivity",
    "pr_curve",
    "rank_matrix",
    "roc_curve",
    "spread_subsample",
    "stratified_folds",
    "summary_metrics",
    "threshold_rule_sweep",
]
