from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..features import FeatureParams, FeatureSet, build_feature_matrix
from ..ingest import LabeledDataset
from ..learners import LearnerSpec, train
from ..learners.base import as_label_array
from .metrics import ConfusionCounts, CurveSeries, MetricsBundle, metrics_from_scores


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def stratified_folds(labels, k: int = 10, seed: int = 0) -> FoldPlan:
    """Shuffle each class and deal its members round-robin over the folds.

    The dealing position carries over from one class to the next so fold
    sizes stay within one of each other as well.
    """
    y = as_label_array(labels)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    assignments = np.empty(len(y), dtype=np.int64)
    offset = 0
    for cls in (1, 0):
        members = np.flatnonzero(y == cls)
        if len(members) < k:
            raise ValueError(f"class {'BOT' if cls else 'HUMAN'} has {len(members)} instances, fewer than k={k}")
        members = members[rng.permutation(len(members))]
        assignments[members] = (offset + np.arange(len(members))) % k
        offset = (offset + len(members)) % k
    return FoldPlan(k, assignments)


def fold_seed(seed: int, fold: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(fold)]).generate_state(1, dtype=np.uint64)[0])


@dataclass
class CVResult:
    metrics: MetricsBundle
    roc: CurveSeries
    pr: CurveSeries
    counts: ConfusionCounts
    scores: np.ndarray
    labels: np.ndarray
    plan: FoldPlan
    fold_metrics: list[MetricsBundle | None] = field(default_factory=list)


def cross_validate_matrix(X, labels, spec: LearnerSpec, k: int = 10, seed: int = 0, schema=None, per_fold: bool = False) -> CVResult:
    """Pooled k-fold evaluation: every held-out score is collected, then scored once."""
    y = as_label_array(labels)
    X = np.asarray(X, dtype=np.float64)
    plan = stratified_folds(y, k, seed)
    scores = np.empty(len(y), dtype=np.float64)
    fold_metrics: list[MetricsBundle | None] = []
    for fold in range(k):
        tr, te = plan.train_indices(fold), plan.test_indices(fold)
        model = train(spec.with_seed(fold_seed(spec.seed, fold)), X[tr], y[tr], schema)
        scores[te] = model.scores(X[te])
        if per_fold:
            try:
                fold_metrics.append(metrics_from_scores(scores[te], y[te])[0])
            except ValueError:
                fold_metrics.append(None)
    metrics, roc, pr, counts = metrics_from_scores(scores, y)
    return CVResult(metrics, roc, pr, counts, scores, y, plan, fold_metrics)


def cross_validate(
    dataset: LabeledDataset,
    feature_set,
    spec: LearnerSpec,
    k: int = 10,
    seed: int = 0,
    params: FeatureParams | None = None,
    per_fold: bool = False,
) -> CVResult:
    schema, X, y = build_feature_matrix(dataset, FeatureSet.parse(feature_set), params)
    return cross_validate_matrix(X, y, spec, k, seed, schema, per_fold)
