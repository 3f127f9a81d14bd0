from datetime import datetime, timedelta, timezone

import sys

import pytest

from botbench.ingest import AccountRecord, Label, LabeledDataset, TweetRecord

T0 = datetime(2020, 1, 1, tzinfo=timezone.utc)


def tweet(i, source="Twitter for iPhone", hashtags=0, urls=0, mentions=0, retweet=False, when=None):
    return TweetRecord(
        id=i,
        created_at=when if when is not None else T0 - timedelta(seconds=i),
        hashtag_count=hashtags,
        url_count=urls,
        mention_count=mentions,
        is_retweet=retweet,
        source_raw=source,
    )


def account(account_id=1, label=Label.BOT, n_tweets=0, cap=None, **kw):
    fields = dict(
        id=account_id,
        screen_name=f"acct{account_id}",
        created_at=T0 - timedelta(days=100),
        friends_count=10,
        followers_count=10,
        statuses_count=100,
        listed_count=0,
        label=label,
        timeline=tuple(tweet(account_id * 10_000 + j) for j in range(n_tweets)),
        botometer_cap_uni=cap,
    )
    fields.update(kw)
    return AccountRecord(**fields)


def dataset(accounts, name="test"):
    return LabeledDataset(name=name, accounts=tuple(accounts))


class FakeClock:
    def __init__(self):
        self.now = 0.0
        self.sleeps = []

    def __call__(self):
        return self.now

    def sleep(self, seconds):
        self.sleeps.append(seconds)
        self.now += seconds


@pytest.fixture
def make_account():
    return account


@pytest.fixture
def make_tweet():
    return tweet


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
