"""
Account records and the line-delimited dataset format.

One JSON object per line::

    {"id": 42, "screen_name": "x", "created_at": "2019-01-01T00:00:00Z",
     "friends_count": 1, "followers_count": 2, "statuses_count": 3,
     "listed_count": 0, "default_profile_image": false, "label": "bot",
     "cap_uni": 0.7, "timeline": [{"id": 7, "created_at": "...",
     "hashtag_count": 0, "url_count": 1, "mention_count": 0,
     "is_retweet": false, "source": "<a href=...>dlvr.it</a>"}]}

Unknown keys are ignored.
"""

from __future__ import annotations

import enum
import json
import logging
import numbers
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)


class Label(enum.IntEnum):
    HUMAN = 0
    BOT = 1

    @classmethod
    def parse(cls, value) -> "Label":
        if isinstance(value, Label):
            return value
        if isinstance(value, str):
            key = value.strip().upper()
            if key in cls.__members__:
                return cls[key]
            raise ValueError(f"unknown label {value!r}")
        if isinstance(value, numbers.Integral) and not isinstance(value, bool) and value in (0, 1):
            return cls(int(value))
        raise ValueError(f"unknown label {value!r}")


class ParseError(ValueError):
    """A malformed line in an account file."""

    def __init__(self, line: int, message: str, path: str | None = None):
        self.line = line
        self.message = message
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")


class DuplicateAccountError(ParseError):
    pass


class LabelPurityError(ValueError):
    pass


_ANCHOR = re.compile(r"<a\b[^>]*>(.*?)</a\s*>", re.IGNORECASE | re.DOTALL)


def parse_source_client(source_raw: str | None) -> str:
    """Display name of the posting client, e.g. ``Twitter for iPhone``."""
    if not source_raw:
        return ""
    m = _ANCHOR.search(source_raw)
    if m:
        return m.group(1).strip()
    return source_raw.strip()


def parse_timestamp(value: str) -> datetime:
    """RFC 3339 timestamp to an aware UTC datetime (seconds resolution)."""
    if not isinstance(value, str):
        raise ValueError(f"timestamp must be a string, got {type(value).__name__}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        raise ValueError(f"timestamp {value!r} has no UTC offset")
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class TweetRecord:
    id: int
    created_at: datetime
    hashtag_count: int = 0
    url_count: int = 0
    mention_count: int = 0
    is_retweet: bool = False
    source_raw: str = ""
    source_client: str = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.source_client is None:
            object.__setattr__(self, "source_client", parse_source_client(self.source_raw))
        for name in ("hashtag_count", "url_count", "mention_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def sort_timeline(tweets: Iterable[TweetRecord]) -> tuple[TweetRecord, ...]:
    """Most recent first; equal timestamps by descending tweet id."""
    return tuple(sorted(tweets, key=lambda t: (t.created_at, t.id), reverse=True))


@dataclass(frozen=True)
class AccountRecord:
    id: int
    screen_name: str
    created_at: datetime
    friends_count: int
    followers_count: int
    statuses_count: int
    listed_count: int
    label: Label
    has_default_profile_image: bool = False
    timeline: tuple[TweetRecord, ...] = ()
    name: str | None = None
    location: str | None = None
    description: str | None = None
    url: str | None = None
    botometer_cap_uni: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "label", Label.parse(self.label))
        object.__setattr__(self, "timeline", sort_timeline(self.timeline))
        for name in ("friends_count", "followers_count", "statuses_count", "listed_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        cap = self.botometer_cap_uni
        if cap is not None and not (0.0 <= cap <= 1.0):
            raise ValueError(f"cap_uni {cap} outside [0, 1]")


@dataclass(frozen=True)
class LabeledDataset:
    name: str
    accounts: tuple[AccountRecord, ...] = ()
    issues: tuple[ParseError, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "accounts", tuple(self.accounts))

    @property
    def bot_count(self) -> int:
        return sum(1 for a in self.accounts if a.label is Label.BOT)

    @property
    def human_count(self) -> int:
        return len(self.accounts) - self.bot_count

    def __len__(self) -> int:
        return len(self.accounts)

    def labels(self) -> list[Label]:
        return [a.label for a in self.accounts]

    def with_accounts(self, accounts: Iterable[AccountRecord], name: str | None = None) -> "LabeledDataset":
        return LabeledDataset(name=self.name if name is None else name, accounts=tuple(accounts))


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

_ACCOUNT_REQUIRED = (
    "id",
    "screen_name",
    "created_at",
    "friends_count",
    "followers_count",
    "statuses_count",
    "listed_count",
    "default_profile_image",
    "label",
    "timeline",
)
_TWEET_REQUIRED = ("id", "created_at", "hashtag_count", "url_count", "mention_count", "is_retweet", "source")


def _count(obj: dict, key: str) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{key} must be an integer")
    if value < 0:
        raise ValueError(f"{key} must be non-negative")
    return value


def _flag(obj: dict, key: str) -> bool:
    value = obj[key]
    if not isinstance(value, bool):
        raise ValueError(f"{key} must be a boolean")
    return value


def _opt_str(obj: dict, key: str) -> str | None:
    value = obj.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValueError(f"{key} must be a string")
    return value


def tweet_from_json(obj: dict) -> TweetRecord:
    missing = [k for k in _TWEET_REQUIRED if k not in obj]
    if missing:
        raise ValueError(f"tweet missing keys: {', '.join(missing)}")
    source = obj["source"]
    if source is None:
        source = ""
    if not isinstance(source, str):
        raise ValueError("source must be a string")
    return TweetRecord(
        id=_count(obj, "id"),
        created_at=parse_timestamp(obj["created_at"]),
        hashtag_count=_count(obj, "hashtag_count"),
        url_count=_count(obj, "url_count"),
        mention_count=_count(obj, "mention_count"),
        is_retweet=_flag(obj, "is_retweet"),
        source_raw=source,
    )


def account_from_json(obj: dict) -> AccountRecord:
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    missing = [k for k in _ACCOUNT_REQUIRED if k not in obj]
    if missing:
        raise ValueError(f"missing keys: {', '.join(missing)}")
    label = obj["label"]
    if label not in ("bot", "human"):
        raise ValueError(f"label must be 'bot' or 'human', got {label!r}")
    timeline = obj["timeline"]
    if not isinstance(timeline, list):
        raise ValueError("timeline must be an array")
    cap = obj.get("cap_uni")
    if cap is not None:
        if isinstance(cap, bool) or not isinstance(cap, (int, float)):
            raise ValueError("cap_uni must be a number")
        cap = float(cap)
    screen_name = obj["screen_name"]
    if not isinstance(screen_name, str):
        raise ValueError("screen_name must be a string")
    return AccountRecord(
        id=_count(obj, "id"),
        screen_name=screen_name,
        created_at=parse_timestamp(obj["created_at"]),
        friends_count=_count(obj, "friends_count"),
        followers_count=_count(obj, "followers_count"),
        statuses_count=_count(obj, "statuses_count"),
        listed_count=_count(obj, "listed_count"),
        has_default_profile_image=_flag(obj, "default_profile_image"),
        label=Label.parse(label),
        timeline=tuple(tweet_from_json(t) for t in timeline),
        name=_opt_str(obj, "name"),
        location=_opt_str(obj, "location"),
        description=_opt_str(obj, "description"),
        url=_opt_str(obj, "url"),
        botometer_cap_uni=cap,
    )


def tweet_to_json(tweet: TweetRecord) -> dict:
    return {
        "id": tweet.id,
        "created_at": format_timestamp(tweet.created_at),
        "hashtag_count": tweet.hashtag_count,
        "url_count": tweet.url_count,
        "mention_count": tweet.mention_count,
        "is_retweet": tweet.is_retweet,
        "source": tweet.source_raw,
    }


def account_to_json(account: AccountRecord) -> dict:
    obj = {
        "id": account.id,
        "screen_name": account.screen_name,
        "created_at": format_timestamp(account.created_at),
        "friends_count": account.friends_count,
        "followers_count": account.followers_count,
        "statuses_count": account.statuses_count,
        "listed_count": account.listed_count,
        "default_profile_image": account.has_default_profile_image,
        "label": account.label.name.lower(),
    }
    for key in ("name", "location", "description", "url"):
        value = getattr(account, key)
        if value is not None:
            obj[key] = value
    if account.botometer_cap_uni is not None:
        obj["cap_uni"] = account.botometer_cap_uni
    obj["timeline"] = [tweet_to_json(t) for t in account.timeline]
    return obj


def parse_account_lines(lines: Iterable[str], name: str = "dataset", strict: bool = False, path: str | None = None) -> LabeledDataset:
    accounts: list[AccountRecord] = []
    issues: list[ParseError] = []
    seen: dict[int, int] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            account = account_from_json(json.loads(line))
        except (ValueError, KeyError, TypeError) as exc:
            err = ParseError(lineno, str(exc), path)
            if strict:
                raise err from exc
            logger.warning("%s", err)
            issues.append(err)
            continue
        if account.id in seen:
            raise DuplicateAccountError(lineno, f"duplicate account id {account.id} (first on line {seen[account.id]})", path)
        seen[account.id] = lineno
        accounts.append(account)
    return LabeledDataset(name=name, accounts=tuple(accounts), issues=tuple(issues))


def parse_account_file(path, strict: bool = False, name: str | None = None) -> LabeledDataset:
    """Read a line-delimited account file.

    Malformed lines are collected on ``dataset.issues`` (and logged) unless
    ``strict`` is set, in which case the first one raises :class:`ParseError`.
    A repeated account id always raises :class:`DuplicateAccountError`.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        return parse_account_lines(fh, name=name or path.stem, strict=strict, path=str(path))


def write_account_file(dataset: LabeledDataset, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for account in dataset.accounts:
            fh.write(json.dumps(account_to_json(account), ensure_ascii=False, sort_keys=False))
            fh.write("\n")


# ---------------------------------------------------------------------------
# filtering and assembly
# ---------------------------------------------------------------------------


def filter_min_posts(dataset: LabeledDataset, min_posts: int) -> LabeledDataset:
    if min_posts < 0:
        raise ValueError("min_posts must be >= 0")
    return dataset.with_accounts(a for a in dataset.accounts if len(a.timeline) >= min_posts)


def _check_purity(dataset: LabeledDataset, expected: Label) -> None:
    for account in dataset.accounts:
        if account.label is not expected:
            raise LabelPurityError(
                f"{dataset.name}: account {account.id} is labeled {account.label.name}, expected {expected.name}"
            )


def assemble_training_set(
    name: str,
    bot_source: LabeledDataset,
    human_source: LabeledDataset,
    require_cap: bool = True,
    min_posts: int = 400,
) -> LabeledDataset:
    """Bots then humans, each in input order, filtered by timeline length and CAP presence."""
    _check_purity(bot_source, Label.BOT)
    _check_purity(human_source, Label.HUMAN)
    merged = LabeledDataset(name=name, accounts=bot_source.accounts + human_source.accounts)
    merged = filter_min_posts(merged, min_posts)
    if require_cap:
        merged = merged.with_accounts(a for a in merged.accounts if a.botometer_cap_uni is not None)
    return merged


def split_by_label(dataset: LabeledDataset) -> tuple[LabeledDataset, LabeledDataset]:
    bots = dataset.with_accounts(a for a in dataset.accounts if a.label is Label.BOT)
    humans = dataset.with_accounts(a for a in dataset.accounts if a.label is Label.HUMAN)
    return bots, humans


def latest_activity(dataset: LabeledDataset) -> datetime | None:
    """Most recent timestamp seen anywhere in the dataset."""
    stamps = [a.created_at for a in dataset.accounts]
    stamps += [a.timeline[0].created_at for a in dataset.accounts if a.timeline]
    return max(stamps) if stamps else None


def count_table(dataset: LabeledDataset, thresholds: Sequence[int] = (0, 100, 200, 300, 400)) -> dict[str, list[int]]:
    """Bot/human counts with at least ``t`` tweets, for each threshold."""
    lengths_bot = [len(a.timeline) for a in dataset.accounts if a.label is Label.BOT]
    lengths_hum = [len(a.timeline) for a in dataset.accounts if a.label is Label.HUMAN]
    return {
        "bot": [sum(1 for n in lengths_bot if n >= t) for t in thresholds],
        "human": [sum(1 for n in lengths_hum if n >= t) for t in thresholds],
    }


def relabel(account: AccountRecord, label: Label) -> AccountRecord:
    return replace(account, label=label)
