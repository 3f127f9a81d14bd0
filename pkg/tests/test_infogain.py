import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from botbench.eval import entropy, info_gain, info_gain_ranking, mdl_discretize, rank_matrix
from botbench.ingest import Label
from botbench.synthetic import make_population

from .conftest import account, dataset


def test_entropy():
    assert entropy([1, 0]) == 1.0
    assert entropy([1, 1, 1]) == 0.0
    assert entropy([]) == 0.0
    assert entropy([1, 0, 0, 0]) == pytest.approx(-(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75)))


def test_four_point_cut():
    assert mdl_discretize([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == [0.5]


def test_unsorted_input():
    assert mdl_discretize([0.9, 0.1, 0.8, 0.2], [1, 0, 1, 0]) == [0.5]


def test_checkerboard_no_cuts():
    v = np.arange(40.0)
    y = np.arange(40) % 2
    assert mdl_discretize(v, y) == []


def test_constant_no_cuts():
    assert mdl_discretize([3.0] * 10, [0, 1] * 5) == []


def test_too_few():
    with pytest.raises(ValueError):
        mdl_discretize([1.0], [1])


def test_two_cuts_on_three_bands():
    v = np.r_[np.arange(20), 100 + np.arange(20), 200 + np.arange(20)].astype(float)
    y = np.r_[np.zeros(20), np.ones(20), np.zeros(20)].astype(int)
    assert mdl_discretize(v, y) == [59.5, 159.5]


def test_class_identical_boolean():
    y = np.array([1, 0] * 20)
    assert info_gain(y.astype(float), y) == pytest.approx(1.0, abs=1e-12)


def test_separating_numeric_gets_full_entropy():
    y = np.r_[np.ones(10, int), np.zeros(30, int)]
    v = np.r_[np.linspace(5, 6, 10), np.linspace(0, 1, 30)]
    assert info_gain(v, y) == pytest.approx(entropy(y), abs=1e-12)


def test_independent_feature():
    # every value carries one of each class
    v = np.repeat(np.arange(10.0), 2)
    y = np.tile([0, 1], 10)
    assert info_gain(v, y) == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_gain_bounds_and_partition_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 60))
    v = rng.integers(0, 8, n).astype(float)
    y = rng.integers(0, 2, n)
    cuts = mdl_discretize(v, y)
    g = info_gain(v, y, cuts)
    assert -1e-12 <= g <= entropy(y) + 1e-12
    # brute force entropy over the partition the cuts induce
    edges = [-np.inf] + cuts + [np.inf]
    cond = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = y[(v > lo) & (v <= hi)]
        cond += len(sel) / n * entropy(sel)
    assert g == pytest.approx(max(entropy(y) - cond, 0.0), abs=1e-12)


def test_rank_order_and_normalisation():
    y = np.array([1, 0] * 20)
    rng = np.random.default_rng(0)
    X = np.c_[np.repeat(np.arange(10.0), 4)[:40] * 0 + rng.integers(0, 3, 40), y, y * 0.5 + 0.1]
    ranked = rank_matrix(X, y, ["noise", "same", "scaled"])
    assert [r.name for r in ranked[:2]] == ["same", "scaled"]
    assert ranked[0].normalized == 1.0 and ranked[1].normalized == 1.0
    assert ranked[0].gain == pytest.approx(1.0)


def test_rank_single_class():
    with pytest.raises(ValueError):
        rank_matrix(np.zeros((3, 1)), [1, 1, 1], ["a"])


def test_ranking_on_dataset():
    bots = [account(i, Label.BOT, n_tweets=1, cap=0.9, listed_count=1) for i in range(10)]
    humans = [account(100 + i, Label.HUMAN, n_tweets=1, cap=0.1) for i in range(10)]
    ranked = info_gain_ranking(dataset(bots + humans), ["cap_uni_star", "class_a"])
    assert ranked[0].name == "cap_uni_star"
    assert ranked[1].name == "belongs_to_list"
    assert ranked[0].normalized == 1.0
    assert all(r.gain == 0 for r in ranked[2:])


def test_ranking_population():
    ranked = info_gain_ranking(make_population(20, 30, seed=2), ["class_b", "client"])
    gains = [r.gain for r in ranked]
    assert gains == sorted(gains, reverse=True)
