"""Keyword-filtered microblog stream.

Records arrive as loose mappings (id, created_at, author_handle, text);
only records whose token set intersects the keyword list become Tweet
values.  The buffered variant models a slow consumer: when the buffer
fills, the oldest unprocessed record is dropped and counted, never the
newest.
"""

from __future__ import annotations

import datetime as dt
from collections import deque
from typing import Iterable, Iterator, Mapping, Optional, Union

from ..corpus import Tweet, to_utc
from ..tokens import tokenize
from .archive import parse_iso

__all__ = ["TweetStream", "ingest_stream", "match_keywords", "to_tweet"]


def match_keywords(text: str, keywords: frozenset[str]) -> frozenset[str]:
    return keywords & frozenset(tokenize(text))


def to_tweet(record: Mapping, keywords: frozenset[str]) -> Optional[Tweet]:
    """Convert one raw record; None when no keyword matches."""
    text = record.get("text") or ""
    matched = match_keywords(text, keywords)
    if not matched:
        return None
    created = record["created_at"]
    if isinstance(created, str):
        created = parse_iso(created)
    return Tweet(
        str(record["id"]),
        to_utc(created),
        record.get("author_handle") or "",
        text,
        matched,
    )


def ingest_stream(
    records: Iterable[Mapping],
    keywords: Iterable[str],
) -> Iterator[Tweet]:
    """Filter a record iterable into tweets, preserving order."""
    kw = frozenset(k.casefold() for k in keywords)
    if not kw:
        raise ValueError("keyword set must be non-empty")
    for record in records:
        tweet = to_tweet(record, kw)
        if tweet is not None:
            yield tweet


class TweetStream:
    """Bounded intake buffer between a fast producer and a slow consumer.

    push() never blocks: a full buffer evicts its oldest unprocessed
    record and increments ``dropped``.  drain() converts and empties the
    buffer in arrival order.
    """

    def __init__(self, keywords: Iterable[str], buffer_size: int = 1000):
        kw = frozenset(k.casefold() for k in keywords)
        if not kw:
            raise ValueError("keyword set must be non-empty")
        if buffer_size < 1:
            raise ValueError("buffer_size must be >= 1")
        self.keywords = kw
        self.buffer_size = buffer_size
        self._buf: deque = deque()
        self.seen = 0
        self.dropped = 0
        self.emitted = 0

    def push(self, record: Mapping) -> None:
        self.seen += 1
        if len(self._buf) >= self.buffer_size:
            self._buf.popleft()
            self.dropped += 1
        self._buf.append(record)

    def drain(self) -> list[Tweet]:
        out = []
        while self._buf:
            tweet = to_tweet(self._buf.popleft(), self.keywords)
            if tweet is not None:
                out.append(tweet)
        self.emitted += len(out)
        return out
