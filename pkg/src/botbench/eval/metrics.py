"""Confusion counts, summary metrics and ROC / PR curves (BOT is the positive class).

Any 0/0 ratio is reported as 0.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..learners.base import as_label_array


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn)


@dataclass(frozen=True)
class MetricsBundle:
    balanced_accuracy: float
    precision: float
    recall: float
    mcc: float
    pr_auc: float
    roc_auc: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class CurveSeries:
    kind: str  # "ROC" or "PR"
    points: tuple[tuple[float, float], ...]
    auc: float


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def confusion_counts(predictions, labels) -> ConfusionCounts:
    """Tally predicted vs true labels; predictions may be labels or Prediction objects."""
    preds = [getattr(p, "label", p) for p in predictions]
    if len(preds) != len(labels):
        raise ValueError(f"{len(preds)} predictions vs {len(labels)} labels")
    if not preds:
        return ConfusionCounts()
    p = as_label_array(preds).astype(bool)
    t = as_label_array(labels).astype(bool)
    return ConfusionCounts(
        tp=int((p & t).sum()), fp=int((p & ~t).sum()), tn=int((~p & ~t).sum()), fn=int((~p & t).sum())
    )


def summary_metrics(counts: ConfusionCounts) -> dict[str, float]:
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    tpr = _ratio(tp, tp + fn)
    tnr = _ratio(tn, tn + fp)
    den = math.sqrt(float(tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    return {
        "balanced_accuracy": (tpr + tnr) / 2.0,
        "precision": _ratio(tp, tp + fp),
        "recall": tpr,
        "mcc": _ratio(float(tp) * tn - float(fp) * fn, den),
    }


def _score_blocks(scores, labels):
    """Cumulative (tp, fp) after each block of tied scores, highest score first."""
    s = np.asarray(scores, dtype=np.float64)
    y = as_label_array(labels)
    if len(s) != len(y):
        raise ValueError("scores and labels differ in length")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("curves need both BOT and HUMAN instances")
    order = np.argsort(-s, kind="stable")
    s, y = s[order], y[order]
    ends = np.r_[np.flatnonzero(s[1:] != s[:-1]), len(s) - 1]
    tp = np.cumsum(y)[ends]
    fp = (ends + 1) - tp
    return tp, fp, n_pos, n_neg, s[ends]


def roc_curve(scores, labels) -> CurveSeries:
    tp, fp, n_pos, n_neg, _ = _score_blocks(scores, labels)
    x = np.r_[0, fp] / n_neg
    y = np.r_[0, tp] / n_pos
    auc = float(np.sum((x[1:] - x[:-1]) * (y[1:] + y[:-1]) / 2.0))
    return CurveSeries("ROC", tuple(zip(x.tolist(), y.tolist())), auc)


def pr_curve(scores, labels) -> CurveSeries:
    """Recall/precision at every score threshold; area by step interpolation."""
    tp, fp, n_pos, _, _ = _score_blocks(scores, labels)
    recall = tp / n_pos
    precision = tp / (tp + fp)
    prev = np.r_[0.0, recall[:-1]]
    auc = float(np.sum(precision * (recall - prev)))
    points = ((0.0, float(precision[0])),) + tuple(zip(recall.tolist(), precision.tolist()))
    return CurveSeries("PR", points, auc)


def metrics_from_scores(scores, labels, threshold: float = 0.5) -> tuple[MetricsBundle, CurveSeries, CurveSeries, ConfusionCounts]:
    s = np.asarray(scores, dtype=np.float64)
    preds = (s >= threshold).astype(np.int64)
    counts = confusion_counts(preds, labels)
    summary = summary_metrics(counts)
    roc = roc_curve(s, labels)
    pr = pr_curve(s, labels)
    return MetricsBundle(pr_auc=pr.auc, roc_auc=roc.auc, **summary), roc, pr, counts
