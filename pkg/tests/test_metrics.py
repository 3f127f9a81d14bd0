import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from botbench.eval import ConfusionCounts, confusion_counts, metrics_from_scores, pr_curve, roc_curve, summary_metrics

from .oracles import mann_whitney, random_instance


def test_confusion_all_correct():
    y = [1] * 10 + [0] * 10
    assert confusion_counts(y, y) == ConfusionCounts(tp=10, fp=0, tn=10, fn=0)


def test_confusion_all_bot():
    y = [1] * 3 + [0] * 7
    c = confusion_counts([1] * 10, y)
    assert (c.tp, c.fp, c.tn, c.fn) == (3, 7, 0, 0)


def test_confusion_empty_and_mismatch():
    assert confusion_counts([], []) == ConfusionCounts()
    with pytest.raises(ValueError):
        confusion_counts([1], [1, 0])


def test_balanced_accuracy_definition():
    m = summary_metrics(ConfusionCounts(tp=8, fn=2, tn=9, fp=1))
    assert m["balanced_accuracy"] == pytest.approx(0.85, abs=1e-12)


def test_mcc_hand_value():
    m = summary_metrics(ConfusionCounts(tp=50, tn=40, fp=10, fn=0))
    assert m["mcc"] == pytest.approx(2000 / math.sqrt(60 * 50 * 50 * 40), abs=1e-12)
    assert m["mcc"] == pytest.approx(0.8165, abs=5e-5)
    assert m["precision"] == pytest.approx(50 / 60, abs=1e-12)
    assert m["recall"] == 1.0


def test_perfect():
    m = summary_metrics(ConfusionCounts(tp=5, tn=7))
    assert m == {"balanced_accuracy": 1.0, "precision": 1.0, "recall": 1.0, "mcc": 1.0}


def test_zero_over_zero():
    m = summary_metrics(ConfusionCounts(tn=7, fn=3))
    assert m["precision"] == 0.0 and m["mcc"] == 0.0 and m["recall"] == 0.0
    assert summary_metrics(ConfusionCounts())["balanced_accuracy"] == 0.0


@pytest.mark.parametrize(
    "labels, expected", [([1, 1, 0, 0], 1.0), ([1, 0, 1, 0], 0.75)]
)
def test_roc_examples(labels, expected):
    assert roc_curve([0.9, 0.8, 0.7, 0.6], labels).auc == expected


def test_roc_all_equal():
    assert roc_curve([0.3] * 6, [1, 0, 0, 1, 0, 0]).auc == 0.5


def test_roc_endpoints():
    c = roc_curve([0.9, 0.1, 0.4, 0.4], [1, 0, 1, 0])
    assert c.points[0] == (0.0, 0.0) and c.points[-1] == (1.0, 1.0)
    xs = [p[0] for p in c.points]
    assert xs == sorted(xs)


def test_single_class():
    with pytest.raises(ValueError):
        roc_curve([0.1, 0.2], [1, 1])
    with pytest.raises(ValueError):
        pr_curve([0.1, 0.2], [0, 0])


def test_pr_step_area():
    # descending: B(0.9) H(0.8) B(0.7) H(0.6)
    # recall 0.5 @ precision 1, then recall 1.0 @ precision 2/3
    c = pr_curve([0.9, 0.8, 0.7, 0.6], [1, 0, 1, 0])
    assert c.auc == pytest.approx(0.5 * 1.0 + 0.5 * (2 / 3), abs=1e-15)


def test_pr_tie_block():
    # one block containing everything: recall 1, precision = base rate
    c = pr_curve([0.5] * 4, [1, 0, 0, 0])
    assert c.auc == 0.25


def test_pr_perfect():
    assert pr_curve([0.9, 0.8, 0.2], [1, 1, 0]).auc == 1.0


def test_metrics_from_scores_threshold_tie():
    bundle, *_ , counts = metrics_from_scores([0.5, 0.2], [1, 0])
    assert counts.tp == 1 and counts.tn == 1 and bundle.balanced_accuracy == 1.0


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_roc_matches_mann_whitney(seed):
    s, y = random_instance(np.random.default_rng(seed))
    assert abs(roc_curve(s, y).auc - mann_whitney(s, y)) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_auc_invariant_under_increasing_transform(seed):
    s, y = random_instance(np.random.default_rng(seed))
    t = np.exp(3 * s) - 7
    assert roc_curve(t, y).auc == pytest.approx(roc_curve(s, y).auc, abs=1e-12)
    assert pr_curve(t, y).auc == pytest.approx(pr_curve(s, y).auc, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_auc_bounds(seed):
    s, y = random_instance(np.random.default_rng(seed))
    assert 0.0 <= roc_curve(s, y).auc <= 1.0
    assert 0.0 <= pr_curve(s, y).auc <= 1.0 + 1e-12
