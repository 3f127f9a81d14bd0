from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from ..features import DEFAULT_WINDOW, FeatureParams, FeatureSet
from ..ingest import Label, LabeledDataset, assemble_training_set
from ..learners import LearnerSpec
from ..learners.base import as_label_array
from .cv import cross_validate
from .metrics import MetricsBundle, confusion_counts, pr_curve, roc_curve, summary_metrics

CRITERIA: dict[str, Callable[[MetricsBundle], float]] = {
    "balanced_accuracy": lambda m: m.balanced_accuracy,
    "precision": lambda m: m.precision,
    "recall": lambda m: m.recall,
    "mcc": lambda m: m.mcc,
}


def threshold_rule_sweep(scores, labels, criterion: str = "balanced_accuracy") -> tuple[float, MetricsBundle]:
    """Best cut for the rule ``score >= th -> BOT``.

    Candidates are every distinct score plus 0; the smallest threshold wins
    ties.  AUC fields of the returned bundle describe the raw scores.
    """
    pick = CRITERIA[criterion]
    s = np.asarray(scores, dtype=np.float64)
    y = as_label_array(labels)
    roc, pr = roc_curve(s, y), pr_curve(s, y)
    best_th, best_m, best_v = None, None, None
    for th in np.unique(np.r_[0.0, s]):
        summary = summary_metrics(confusion_counts((s >= th).astype(np.int64), y))
        m = MetricsBundle(pr_auc=pr.auc, roc_auc=roc.auc, **summary)
        v = pick(m)
        if best_v is None or v > best_v:
            best_th, best_m, best_v = float(th), m, v
    return best_th, best_m


def spread_subsample(dataset: LabeledDataset, max_ratio: float = 1.0, seed: int = 0) -> LabeledDataset:
    """Keep every minority account and at most ``floor(max_ratio * minority)`` majority ones.

    Sampled accounts keep their original relative order.  On equal class
    sizes HUMAN is treated as the majority.
    """
    if max_ratio < 1:
        raise ValueError("max_ratio must be >= 1")
    bots, humans = dataset.bot_count, dataset.human_count
    if bots == 0 or humans == 0:
        raise ValueError("spread subsampling needs both classes present")
    minority = Label.BOT if bots <= humans else Label.HUMAN
    n_min = min(bots, humans)
    majority_idx = [i for i, a in enumerate(dataset.accounts) if a.label is not minority]
    keep_n = int(np.floor(max_ratio * n_min))
    if keep_n >= len(majority_idx):
        return dataset.with_accounts(dataset.accounts)
    rng = np.random.default_rng(seed)
    chosen = set(np.asarray(majority_idx)[rng.choice(len(majority_idx), size=keep_n, replace=False)].tolist())
    return dataset.with_accounts(
        a for i, a in enumerate(dataset.accounts) if a.label is minority or i in chosen
    )


@dataclass(frozen=True)
class SensitivityRow:
    min_posts: int
    window: int
    bot_count: int
    human_count: int
    roc_auc: float


def min_posts_sensitivity(
    bot_source: LabeledDataset,
    human_source: LabeledDataset,
    feature_set,
    spec: LearnerSpec,
    thresholds: Sequence[int] = (100, 200, 300, 400),
    k: int = 10,
    seed: int = 0,
    params: FeatureParams | None = None,
    require_cap: bool | None = None,
    max_window: int = DEFAULT_WINDOW,
) -> list[SensitivityRow]:
    """ROC-AUC of a CV run re-assembled at each minimum timeline length.

    Timeline windows shrink with the threshold: ``min(t, max_window)``.
    """
    if list(thresholds) != sorted(thresholds):
        raise ValueError("thresholds must be sorted ascending")
    feature_set = FeatureSet.parse(feature_set)
    params = params or FeatureParams()
    if require_cap is None:
        require_cap = feature_set is FeatureSet.CAP_UNI_STAR
    rows = []
    for t in thresholds:
        data = assemble_training_set(bot_source.name, bot_source, human_source, require_cap=require_cap, min_posts=t)
        if data.bot_count == 0 or data.human_count == 0:
            raise ValueError(f"min_posts={t} leaves a class empty")
        window = max(1, min(t, max_window))
        result = cross_validate(data, feature_set, spec, k, seed, replace(params, window=window))
        rows.append(SensitivityRow(t, window, data.bot_count, data.human_count, result.metrics.roc_auc))
    return rows
