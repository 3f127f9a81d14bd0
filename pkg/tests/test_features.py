import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from botbench.features import (
    CLASS_A_SCHEMA,
    CapAdjustment,
    ClientRegistry,
    FeatureKind,
    FeatureParams,
    FeatureSet,
    build_combined_matrix,
    build_feature_matrix,
    cap_star,
    extract_class_a,
    extract_class_b,
    extract_client_proportion,
)
from botbench.ingest import Label
from botbench.synthetic import make_population

from .conftest import T0, account, dataset
from .golden import CLASS_A_CASES, CLASS_B_CASES, CLIENT_CASES


@pytest.mark.parametrize("acct, expected", CLASS_A_CASES, ids=lambda v: getattr(v, "screen_name", ""))
def test_class_a_golden(acct, expected):
    assert list(extract_class_a(acct, T0).values) == [float(v) for v in expected]


def test_class_a_booleans_are_binary():
    for acct, _ in CLASS_A_CASES:
        vec = extract_class_a(acct, T0)
        for kind, v in zip(CLASS_A_SCHEMA.kinds, vec.values):
            if kind is FeatureKind.BOOLEAN:
                assert v in (0.0, 1.0)
            assert math.isfinite(v)


def test_class_a_reference_before_creation():
    acct, _ = CLASS_A_CASES[0]
    with pytest.raises(ValueError):
        extract_class_a(acct, acct.created_at.replace(year=1990))


def test_near_100_tolerance_configurable():
    acct = CLASS_A_CASES[5][0]  # ratio 94
    assert extract_class_a(acct, T0, near_100_tolerance=0.06)["friends_followers_ratio_near_100"] == 1.0


@pytest.mark.parametrize("acct, window, expected", CLASS_B_CASES)
def test_class_b_golden(acct, window, expected):
    assert extract_class_b(acct, window).values == expected


def _brute_rates(tweets):
    n = len(tweets)
    h = u = m = r = 0
    for t in tweets:
        h += t.hashtag_count >= 1
        u += t.url_count >= 1
        m += t.mention_count >= 1
        r += bool(t.is_retweet)
    return (h / n, u / n, m / n, r / n)


@given(st.integers(1, 10_000), st.integers(1, 700))
def test_class_b_matches_recount(seed, window):
    ds = make_population(1, 0, seed=seed, min_len=1, max_len=600)
    acct = ds.accounts[0]
    assert extract_class_b(acct, window).values == _brute_rates(acct.timeline[:window])


def test_class_b_empty_timeline():
    with pytest.raises(ValueError):
        extract_class_b(account(1), 400)


@pytest.mark.parametrize("acct, window, expected", CLIENT_CASES)
def test_client_golden(acct, window, expected):
    assert extract_client_proportion(acct, ClientRegistry(), window) == expected


def test_client_complement():
    reg = ClientRegistry()
    for acct, window, _ in CLIENT_CASES:
        tweets = acct.timeline[:window]
        official = sum(1 for t in tweets if reg.is_official(t.source_client)) / len(tweets)
        assert extract_client_proportion(acct, reg, window) + official == 1.0


def test_registry_file(tmp_path):
    p = tmp_path / "clients.txt"
    p.write_text("# official\n  Twitter for iPhone  \n\nTweetDeck\n")
    reg = ClientRegistry.from_file(p)
    assert reg.official_clients == frozenset({"Twitter for iPhone", "TweetDeck"})
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(ValueError):
        ClientRegistry.from_file(empty)


class TestCapStar:
    @pytest.mark.parametrize(
        "raw, prior, expected", [(0.5, 0.15, 0.5), (0.6, 0.075, 0.3), (0.9, 0.30, 1.0)]
    )
    def test_examples(self, raw, prior, expected):
        assert cap_star(raw, CapAdjustment(domain_prior=prior)) == pytest.approx(expected, abs=1e-15)

    @given(st.floats(0, 1), st.floats(0.001, 1), st.floats(0, 1))
    def test_monotone(self, a, prior, b):
        lo, hi = sorted((a, b))
        adj = CapAdjustment(prior)
        assert cap_star(lo, adj) <= cap_star(hi, adj)
        assert 0 <= cap_star(hi, adj) <= 1
        assert cap_star(hi, CapAdjustment(prior / 2)) <= cap_star(hi, adj)

    @pytest.mark.parametrize("raw", [-0.1, 1.2, float("nan")])
    def test_bad_raw(self, raw):
        with pytest.raises(ValueError):
            cap_star(raw, CapAdjustment(0.2))

    def test_bad_priors(self):
        with pytest.raises(ValueError):
            CapAdjustment(domain_prior=0.2, base_prior=0.0)
        with pytest.raises(ValueError):
            CapAdjustment(domain_prior=0.0)


class TestMatrix:
    def test_domain_prior_default(self):
        bots = [account(i, Label.BOT, cap=0.3) for i in range(642)]
        humans = [account(1000 + i, Label.HUMAN, cap=0.3) for i in range(1919)]
        ds = dataset(bots + humans)
        schema, X, y = build_feature_matrix(ds, FeatureSet.CAP_UNI_STAR)
        prior = 642 / 2561
        assert prior == pytest.approx(0.2507, abs=5e-5)
        assert X.shape == (2561, 1)
        assert X[0, 0] == 0.3 * (prior / 0.15)
        assert y.sum() == 642

    def test_shapes(self):
        ds = make_population(2, 1, seed=0)
        assert build_feature_matrix(ds, "class_a")[1].shape == (3, 15)
        assert build_feature_matrix(ds, "class_b")[1].shape == (3, 4)
        assert build_feature_matrix(ds, "client")[1].shape == (3, 1)
        schema, X, _ = build_combined_matrix(ds, list(FeatureSet))
        assert X.shape == (3, 21) and len(set(schema.names)) == 21

    def test_missing_cap(self):
        ds = dataset([account(1, cap=0.2), account(2, Label.HUMAN)])
        with pytest.raises(ValueError, match="cap_uni"):
            build_feature_matrix(ds, FeatureSet.CAP_UNI_STAR)

    def test_empty(self):
        with pytest.raises(ValueError):
            build_feature_matrix(dataset([]), FeatureSet.CLASS_A)

    def test_empty_registry_rejected(self):
        with pytest.raises(ValueError):
            FeatureParams(registry=ClientRegistry(frozenset()))

    def test_pure(self):
        ds = make_population(3, 3, seed=5)
        a = build_feature_matrix(ds, FeatureSet.CLASS_A)[1]
        b = build_feature_matrix(ds, FeatureSet.CLASS_A)[1]
        assert np.array_equal(a, b)
