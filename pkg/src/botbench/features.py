"""
Profile, timeline, client-source and adjusted-CAP features.

All extractors are pure functions of an :class:`AccountRecord`.  Degenerate
denominators are resolved rather than propagated:

* ``friends / followers**2`` uses ``max(followers, 1)``;
* the two ratio flags are false when ``followers == 0``;
* account age is at least one second.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ingest import AccountRecord, LabeledDataset, latest_activity

SECONDS_PER_DAY = 86400.0
DEFAULT_WINDOW = 400
DEFAULT_BASE_PRIOR = 0.15


class FeatureKind(enum.Enum):
    NUMERIC = "numeric"
    BOOLEAN = "boolean"


class FeatureSet(enum.Enum):
    CAP_UNI_STAR = "cap_uni_star"
    CLASS_A = "class_a"
    CLASS_B = "class_b"
    CLIENT = "client"

    @classmethod
    def parse(cls, value) -> "FeatureSet":
        if isinstance(value, FeatureSet):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if member.value == key or member.name.lower() == key:
                return member
        raise ValueError(f"unknown feature set {value!r}")


@dataclass(frozen=True)
class FeatureSchema:
    names: tuple[str, ...]
    kinds: tuple[FeatureKind, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "kinds", tuple(self.kinds))
        if len(self.names) != len(self.kinds):
            raise ValueError("names and kinds differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("feature names must be unique")

    def __len__(self) -> int:
        return len(self.names)

    def __add__(self, other: "FeatureSchema") -> "FeatureSchema":
        return FeatureSchema(self.names + other.names, self.kinds + other.kinds)


@dataclass(frozen=True)
class FeatureVector:
    schema: FeatureSchema
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != len(self.schema):
            raise ValueError("value count does not match schema")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def __getitem__(self, name: str) -> float:
        return self.values[self.schema.names.index(name)]


N, B = FeatureKind.NUMERIC, FeatureKind.BOOLEAN

CLASS_A_SCHEMA = FeatureSchema(
    names=(
        "friends_count",
        "followers_count",
        "tweets_count",
        "friends_per_followers_sq",
        "account_age_days",
        "following_rate",
        "has_name",
        "has_image",
        "has_address",
        "has_biography",
        "has_url",
        "belongs_to_list",
        "followers_x2_ge_friends",
        "friends_followers_ratio_near_100",
        "friends_followers_ratio_ge_50",
    ),
    kinds=(N, N, N, N, N, N, B, B, B, B, B, B, B, B, B),
)

CLASS_B_SCHEMA = FeatureSchema(
    names=("hashtag_rate", "url_rate", "mention_rate", "retweet_rate"),
    kinds=(N, N, N, N),
)

CLIENT_SCHEMA = FeatureSchema(names=("unofficial_client_rate",), kinds=(N,))
CAP_SCHEMA = FeatureSchema(names=("cap_uni_star",), kinds=(N,))

SCHEMAS = {
    FeatureSet.CAP_UNI_STAR: CAP_SCHEMA,
    FeatureSet.CLASS_A: CLASS_A_SCHEMA,
    FeatureSet.CLASS_B: CLASS_B_SCHEMA,
    FeatureSet.CLIENT: CLIENT_SCHEMA,
}


# ---------------------------------------------------------------------------
# official clients
# ---------------------------------------------------------------------------

DEFAULT_OFFICIAL_CLIENTS = (
    "Twitter for iPhone",
    "Twitter for Android",
    "Twitter for iPad",
    "Twitter Web Client",
    "Twitter Web App",
    "TweetDeck",
    "Twitter for Mac",
    "Twitter Lite",
    "Mobile Web",
)


@dataclass(frozen=True)
class ClientRegistry:
    official_clients: frozenset[str] = field(default_factory=lambda: frozenset(DEFAULT_OFFICIAL_CLIENTS))

    def __post_init__(self):
        names = frozenset(c.strip() for c in self.official_clients if c.strip())
        if not names:
            raise ValueError("client registry must not be empty")
        object.__setattr__(self, "official_clients", names)

    def is_official(self, client: str) -> bool:
        return client.strip() in self.official_clients

    @classmethod
    def from_file(cls, path) -> "ClientRegistry":
        names = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            text = line.strip()
            if text and not text.startswith("#"):
                names.append(text)
        return cls(frozenset(names))


# ---------------------------------------------------------------------------
# extractors
# ---------------------------------------------------------------------------


def _present(text: str | None) -> float:
    return 1.0 if text is not None and text.strip() else 0.0


def extract_class_a(
    account: AccountRecord,
    reference_time: datetime,
    near_100_tolerance: float = 0.05,
) -> FeatureVector:
    seconds = (reference_time - account.created_at).total_seconds()
    if seconds < 0:
        raise ValueError("reference_time precedes account creation")
    age_days = max(seconds, 1.0) / SECONDS_PER_DAY

    friends = float(account.friends_count)
    followers = float(account.followers_count)
    ratio = friends / followers if followers > 0 else None
    lo, hi = 100.0 * (1 - near_100_tolerance), 100.0 * (1 + near_100_tolerance)

    values = (
        friends,
        followers,
        float(account.statuses_count),
        friends / max(followers, 1.0) ** 2,
        age_days,
        friends / age_days,
        _present(account.name),
        0.0 if account.has_default_profile_image else 1.0,
        _present(account.location),
        _present(account.description),
        _present(account.url),
        1.0 if account.listed_count > 0 else 0.0,
        1.0 if 2 * followers >= friends else 0.0,
        1.0 if ratio is not None and lo <= ratio <= hi else 0.0,
        1.0 if ratio is not None and ratio >= 50 else 0.0,
    )
    return FeatureVector(CLASS_A_SCHEMA, values)


def _window(account: AccountRecord, window: int):
    if not account.timeline:
        raise ValueError(f"account {account.id} has an empty timeline")
    if window < 1:
        raise ValueError("window must be >= 1")
    return account.timeline[:window]


def extract_class_b(account: AccountRecord, window: int = DEFAULT_WINDOW) -> FeatureVector:
    tweets = _window(account, window)
    n = len(tweets)
    values = (
        sum(1 for t in tweets if t.hashtag_count > 0) / n,
        sum(1 for t in tweets if t.url_count > 0) / n,
        sum(1 for t in tweets if t.mention_count > 0) / n,
        sum(1 for t in tweets if t.is_retweet) / n,
    )
    return FeatureVector(CLASS_B_SCHEMA, values)


def extract_client_proportion(account: AccountRecord, registry: ClientRegistry, window: int = DEFAULT_WINDOW) -> float:
    """Share of the windowed tweets not posted from an official client."""
    tweets = _window(account, window)
    unofficial = sum(1 for t in tweets if not t.source_client or not registry.is_official(t.source_client))
    return unofficial / len(tweets)


@dataclass(frozen=True)
class CapAdjustment:
    domain_prior: float
    base_prior: float = DEFAULT_BASE_PRIOR

    def __post_init__(self):
        if not self.base_prior > 0:
            raise ValueError("base_prior must be > 0")
        if not 0 < self.domain_prior <= 1:
            raise ValueError("domain_prior must lie in (0, 1]")

    @property
    def factor(self) -> float:
        return self.domain_prior / self.base_prior


def cap_star(raw_cap: float, adj: CapAdjustment) -> float:
    """Rescale a CAP score from the generic bot prior to the dataset's prior, capped at 1."""
    if not 0.0 <= raw_cap <= 1.0:
        raise ValueError(f"raw_cap {raw_cap} outside [0, 1]")
    return min(1.0, raw_cap * adj.factor)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass
class FeatureParams:
    window: int = DEFAULT_WINDOW
    registry: ClientRegistry = field(default_factory=ClientRegistry)
    base_prior: float = DEFAULT_BASE_PRIOR
    domain_prior: float | None = None
    reference_time: datetime | None = None
    near_100_tolerance: float = 0.05


def build_feature_matrix(
    dataset: LabeledDataset,
    feature_set,
    params: FeatureParams | None = None,
) -> tuple[FeatureSchema, np.ndarray, np.ndarray]:
    """Rows follow dataset order; labels are 1 for BOT and 0 for HUMAN.

    The CAP prior defaults to the dataset's bot share.  The Class A
    reference time defaults to the most recent timestamp in the dataset.
    """
    feature_set = FeatureSet.parse(feature_set)
    params = params or FeatureParams()
    if len(dataset) == 0:
        raise ValueError("cannot build features for an empty dataset")
    accounts = dataset.accounts
    labels = np.array([int(a.label) for a in accounts], dtype=np.int64)

    if feature_set is FeatureSet.CAP_UNI_STAR:
        missing = [a.id for a in accounts if a.botometer_cap_uni is None]
        if missing:
            raise ValueError(f"{len(missing)} accounts lack cap_uni (first: {missing[0]})")
        prior = params.domain_prior
        if prior is None:
            prior = dataset.bot_count / len(dataset)
        adj = CapAdjustment(domain_prior=prior, base_prior=params.base_prior)
        rows = [[cap_star(a.botometer_cap_uni, adj)] for a in accounts]
    elif feature_set is FeatureSet.CLASS_A:
        ref = params.reference_time or latest_activity(dataset)
        rows = [extract_class_a(a, ref, params.near_100_tolerance).values for a in accounts]
    elif feature_set is FeatureSet.CLASS_B:
        rows = [extract_class_b(a, params.window).values for a in accounts]
    else:
        rows = [[extract_client_proportion(a, params.registry, params.window)] for a in accounts]

    X = np.asarray(rows, dtype=np.float64)
    return SCHEMAS[feature_set], X, labels


def build_combined_matrix(
    dataset: LabeledDataset,
    feature_sets: Iterable,
    params: FeatureParams | None = None,
) -> tuple[FeatureSchema, np.ndarray, np.ndarray]:
    schema = None
    blocks = []
    labels = None
    for fs in feature_sets:
        s, X, labels = build_feature_matrix(dataset, fs, params)
        schema = s if schema is None else schema + s
        blocks.append(X)
    if schema is None:
        raise ValueError("no feature sets given")
    return schema, np.hstack(blocks), labels


def parse_feature_sets(values: Sequence) -> list[FeatureSet]:
    return [FeatureSet.parse(v) for v in values]
