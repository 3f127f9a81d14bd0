"""Seeded synthetic account populations for tests, demos and benchmarks.

Timeline attributes repeat with period 100, so Class B and client rates are
identical for every window that is a multiple of 100.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import numpy as np

from .ingest import AccountRecord, Label, LabeledDataset, TweetRecord

EPOCH = datetime(2020, 6, 1, tzinfo=timezone.utc)
PERIOD = 100

OFFICIAL = "<a href=\"http://twitter.com/download/iphone\" rel=\"nofollow\">Twitter for iPhone</a>"
UNOFFICIAL = "<a href=\"https://dlvrit.com/\" rel=\"nofollow\">dlvr.it</a>"


def periodic_timeline(rng, account_id, length, rates, end=EPOCH):
    """``rates`` = (hashtag, url, mention, retweet, unofficial) in units of 1/PERIOD."""
    flags = []
    for r in rates:
        pattern = np.zeros(PERIOD, dtype=bool)
        pattern[rng.choice(PERIOD, size=int(r), replace=False)] = True
        flags.append(pattern)
    tweets = []
    for i in range(length):
        j = i % PERIOD
        tweets.append(
            TweetRecord(
                id=account_id * 100_000 + (length - i),
                created_at=end - timedelta(minutes=37 * i),
                hashtag_count=int(flags[0][j]),
                url_count=int(flags[1][j]) * 2,
                mention_count=int(flags[2][j]),
                is_retweet=bool(flags[3][j]),
                source_raw=UNOFFICIAL if flags[4][j] else OFFICIAL,
            )
        )
    return tuple(tweets)


def make_population(
    n_bots: int = 60,
    n_humans: int = 90,
    seed: int = 0,
    min_len: int = 400,
    max_len: int = 600,
    separation: float = 1.0,
    name: str = "synthetic",
    with_cap: bool = True,
) -> LabeledDataset:
    """Bots and humans whose feature distributions differ by ``separation`` (0 = identical)."""
    rng = np.random.default_rng(seed)
    accounts = []
    for i in range(n_bots + n_humans):
        is_bot = i < n_bots
        shift = separation if is_bot else 0.0
        rates = np.clip(rng.normal(30 + 25 * shift, 12, size=5), 0, PERIOD).round()
        length = int(rng.integers(min_len, max_len + 1))
        account_id = i + 1
        followers = int(rng.lognormal(6 - 2 * shift, 1.0))
        friends = int(rng.lognormal(5 + 1.5 * shift, 1.0))
        cap = float(np.clip(rng.beta(2 + 4 * shift, 4), 0, 1)) if with_cap else None
        accounts.append(
            AccountRecord(
                id=account_id,
                screen_name=f"user{account_id}",
                created_at=EPOCH - timedelta(days=int(rng.integers(30, 3000))),
                friends_count=friends,
                followers_count=followers,
                statuses_count=length + int(rng.integers(0, 5000)),
                listed_count=int(rng.poisson(max(3 * (1 - 0.5 * shift), 0.0) + 0.1)),
                label=Label.BOT if is_bot else Label.HUMAN,
                has_default_profile_image=bool(rng.random() < 0.2 + 0.3 * shift),
                timeline=periodic_timeline(rng, account_id, length, rates),
                name=f"User {account_id}" if rng.random() > 0.05 else None,
                location="Pisa" if rng.random() < 0.6 - 0.3 * shift else "",
                description="hello" if rng.random() < 0.7 - 0.3 * shift else None,
                url="https://example.org" if rng.random() < 0.3 else None,
                botometer_cap_uni=cap,
            )
        )
    return LabeledDataset(name=name, accounts=tuple(accounts))
