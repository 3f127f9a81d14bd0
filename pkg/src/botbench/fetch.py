"""Paginated timeline fetching behind a shared sliding-window rate limiter."""

from __future__ import annotations

import json
import logging
import math
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from collections import deque
from typing import Callable, Mapping, Protocol, Sequence

from .ingest import TweetRecord, parse_account_file, sort_timeline, tweet_from_json

logger = logging.getLogger(__name__)

DEFAULT_REQUESTS_PER_WINDOW = 1500
DEFAULT_WINDOW_SECONDS = 15 * 60


class FetchError(RuntimeError):
    pass


class AccountNotFound(FetchError):
    pass


class AuthorizationError(FetchError):
    pass


class TransientError(FetchError):
    """Retryable failure (rate-limit response, 5xx, timeout)."""


class RetryBudgetExhausted(FetchError):
    pass


class RateLimiter:
    """Thread-safe sliding-window limiter: at most ``capacity`` requests in any ``window`` seconds.

    ``acquire`` blocks (through the injected ``sleep``) until the oldest
    request in the window ages out; it never refuses a request.
    """

    def __init__(
        self,
        capacity: int = DEFAULT_REQUESTS_PER_WINDOW,
        window: float = DEFAULT_WINDOW_SECONDS,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if window <= 0:
            raise ValueError("window must be > 0")
        self.capacity = int(capacity)
        self.window = float(window)
        self._clock = clock
        self._sleep = sleep
        self._stamps: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self) -> float:
        """Record one request, returning the total time spent waiting."""
        waited = 0.0
        while True:
            with self._lock:
                now = self._clock()
                while self._stamps and self._stamps[0] <= now - self.window:
                    self._stamps.popleft()
                if len(self._stamps) < self.capacity:
                    self._stamps.append(now)
                    return waited
                wait = self._stamps[0] + self.window - now
            self._sleep(wait)
            waited += wait


class TimelineTransport(Protocol):
    def fetch_page(self, account_id: int, page_size: int, token: str | None) -> tuple[list[TweetRecord], str | None]:
        """One page of tweets, most recent first, plus the next token (None at the end)."""


class FixtureTransport:
    """In-memory transport over pre-recorded timelines; tokens are offsets."""

    def __init__(self, timelines: Mapping[int, Sequence[TweetRecord]], max_page_size: int = 200):
        self._timelines = {int(k): sort_timeline(v) for k, v in timelines.items()}
        self.max_page_size = max_page_size
        self.requests: list[tuple[int, int, str | None]] = []

    @classmethod
    def from_account_file(cls, path, max_page_size: int = 200) -> "FixtureTransport":
        dataset = parse_account_file(path)
        return cls({a.id: a.timeline for a in dataset.accounts}, max_page_size=max_page_size)

    def fetch_page(self, account_id, page_size, token):
        self.requests.append((account_id, page_size, token))
        if account_id not in self._timelines:
            raise AccountNotFound(f"account {account_id} not found")
        timeline = self._timelines[account_id]
        start = int(token) if token else 0
        stop = start + min(page_size, self.max_page_size)
        page = list(timeline[start:stop])
        return page, (str(stop) if stop < len(timeline) else None)


class HttpTransport:
    """Minimal JSON-over-HTTP transport.

    ``GET {base_url}/{account_id}?count=N[&pagination_token=T]`` must answer
    ``{"data": [tweet, ...], "next_token": "..."|null}`` where each tweet uses
    the account-file tweet schema.
    """

    def __init__(self, base_url: str, bearer_token: str | None = None, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.bearer_token = bearer_token
        self.timeout = timeout

    def fetch_page(self, account_id, page_size, token):
        query = {"count": page_size}
        if token:
            query["pagination_token"] = token
        url = f"{self.base_url}/{account_id}?{urllib.parse.urlencode(query)}"
        req = urllib.request.Request(url)
        if self.bearer_token:
            req.add_header("Authorization", f"Bearer {self.bearer_token}")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise AccountNotFound(f"account {account_id} not found") from exc
            if exc.code in (401, 403):
                raise AuthorizationError(f"HTTP {exc.code} for account {account_id}") from exc
            if exc.code == 429 or exc.code >= 500:
                raise TransientError(f"HTTP {exc.code}") from exc
            raise FetchError(f"HTTP {exc.code}") from exc
        except (urllib.error.URLError, TimeoutError) as exc:
            raise TransientError(str(exc)) from exc
        tweets = [tweet_from_json(t) for t in body.get("data") or []]
        return tweets, body.get("next_token")


def fetch_timeline(
    account_id: int,
    want: int,
    transport: TimelineTransport,
    page_size: int = 100,
    limiter: RateLimiter | None = None,
    max_attempts: int = 3,
    backoff: float = 1.0,
    sleep: Callable[[float], None] = time.sleep,
) -> list[TweetRecord]:
    """Up to ``want`` most recent tweets of one account.

    Issues at most ``ceil(want / page_size)`` page requests.  Every request
    (retries included) takes a token from ``limiter``.  Transient failures
    are retried with exponential backoff ``backoff * 2**attempt`` up to
    ``max_attempts`` tries per page.
    """
    if want <= 0:
        raise ValueError("want must be > 0")
    if page_size <= 0:
        raise ValueError("page_size must be > 0")
    tweets: list[TweetRecord] = []
    token: str | None = None
    for _ in range(math.ceil(want / page_size)):
        for attempt in range(max_attempts):
            if limiter is not None:
                limiter.acquire()
            try:
                page, token = transport.fetch_page(account_id, page_size, token)
                break
            except TransientError as exc:
                if attempt + 1 == max_attempts:
                    raise RetryBudgetExhausted(
                        f"account {account_id}: {max_attempts} attempts failed"
                    ) from exc
                delay = backoff * 2**attempt
                logger.info("transient failure for %s (%s); retrying in %.1fs", account_id, exc, delay)
                sleep(delay)
        tweets.extend(page)
        if token is None or len(tweets) >= want:
            break
    return list(sort_timeline(tweets))[:want]


def estimate_follower_calls(follower_count: int, ids_per_call: int = 5000) -> int:
    """API calls needed to page through a follower list."""
    if ids_per_call <= 0:
        raise ValueError("ids_per_call must be > 0")
    if follower_count < 0:
        raise ValueError("follower_count must be >= 0")
    return -(-follower_count // ids_per_call)
