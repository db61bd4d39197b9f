"""Batch operations: ingest page dumps, build the index, snapshot shops.

These are the exclusive writers of the store; the API process only
reads.  Each operation returns a report object whose fields the CLI
prints verbatim.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Mapping, Optional, Sequence, Union

from ..ingest import (
    FORUM_ADAPTERS,
    AdapterMismatch,
    ArchiveRecord,
    MalformedPage,
    ShopDescriptor,
    extract_forum_records,
    extract_shop_snapshot,
    ingest_stream,
    record_for,
)
from ..textindex import build_index
from .config import ServiceConfig
from .store import DuplicateSnapshot, EmptyStore, Store, StoreError

__all__ = [
    "IndexReport",
    "IngestReport",
    "IoFailure",
    "SnapshotReport",
    "UnknownAdapter",
    "cli_index",
    "cli_ingest",
    "corpus_records",
    "snapshot_shops",
]

log = logging.getLogger(__name__)

STREAM_ADAPTER = "twitter"


class UnknownAdapter(StoreError):
    pass


class IoFailure(StoreError):
    pass


@dataclass(frozen=True)
class IngestReport:
    adapter: str
    inputs: int
    written: Mapping[str, int]  # record type -> count appended
    skipped: int
    errors: tuple[str, ...]

    @property
    def total_written(self) -> int:
        return sum(self.written.values())

    @property
    def sections(self) -> int:
        return self.written.get("section", 0)

    @property
    def threads(self) -> int:
        return self.written.get("thread", 0)

    @property
    def posts(self) -> int:
        return self.written.get("post", 0)

    @property
    def users(self) -> int:
        return self.written.get("user", 0)

    @property
    def tweets(self) -> int:
        return self.written.get("tweet", 0)


@dataclass(frozen=True)
class IndexReport:
    docs: int
    terms: int
    path: Path


@dataclass(frozen=True)
class SnapshotReport:
    captured_at: dt.date
    written: tuple[int, ...]  # shop ids snapshotted this run
    duplicates: tuple[int, ...]  # shop ids refused as already captured
    failures: Mapping[int, str] = field(default_factory=dict)  # shop id -> reason


def _now() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc)


def corpus_records(corpus, ingested_at: Optional[dt.datetime] = None):
    """Flatten an in-memory corpus back into archive records.

    Shop snapshots are omitted: they live in the relational tables, not
    the archives.
    """
    at = ingested_at or _now()
    for forum in corpus.forums.values():
        for sid in forum.descendants(forum.root_id):
            yield record_for(forum.sections[sid], at, forum.id)
        for thread in forum.threads.values():
            yield record_for(thread, at, forum.id)
        for post in forum.posts:
            yield record_for(post, at, forum.id)
        for user in forum.users.values():
            yield record_for(user, at, forum.id)
    for tweet in corpus.tweets:
        yield record_for(tweet, at)


def _read_bytes(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _stream_records(path: Path, keywords, ingested_at) -> list[ArchiveRecord]:
    def raw_lines():
        for i, line in enumerate(_read_bytes(path).decode("utf-8").splitlines()):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedPage(f"{path}:{i + 1}: bad JSON: {exc}") from exc

    return [record_for(tw, ingested_at) for tw in ingest_stream(raw_lines(), keywords)]


def cli_ingest(
    adapter: str,
    paths: Sequence[Union[str, Path]],
    store: Store,
    config: Optional[ServiceConfig] = None,
    now: Optional[dt.datetime] = None,
) -> IngestReport:
    """Extract records from input dumps and append the new ones.

    Per-input extraction failures are reported and do not stop the run;
    an unknown adapter name or an unreadable input does.  Records whose
    identity is already in the store are counted as skipped, so rerunning
    over the same dumps is a no-op.
    """
    known = set(FORUM_ADAPTERS) | {STREAM_ADAPTER}
    if adapter not in known:
        raise UnknownAdapter(f"adapter {adapter!r}; known: {', '.join(sorted(known))}")
    ingested_at = now or _now()

    records: list[ArchiveRecord] = []
    errors = []
    for raw_path in paths:
        path = Path(raw_path)
        try:
            if adapter == STREAM_ADAPTER:
                if config is None:
                    raise StoreError("stream ingestion needs a config for the keyword list")
                records.extend(_stream_records(path, config.keywords, ingested_at))
            else:
                page = _read_bytes(path)
                records.extend(extract_forum_records(page, FORUM_ADAPTERS[adapter]))
        except (AdapterMismatch, MalformedPage) as exc:
            log.warning("skipping %s: %s", path, exc)
            errors.append(f"{path}: {exc}")

    appended, skipped = store.append_records(records, _label(adapter, ingested_at))
    counts = dict(Counter(rec.record_type for rec in appended))
    return IngestReport(adapter, len(paths), MappingProxyType(counts), skipped, tuple(errors))


def _label(adapter: str, ingested_at: dt.datetime) -> str:
    return f"{adapter}-{ingested_at:%Y%m%dT%H%M%S}"


def cli_index(store: Store) -> IndexReport:
    """Rebuild the term index from the store and swap it in atomically."""
    corpus = store.load_corpus()
    index = build_index(corpus)
    if index.doc_count() == 0:
        raise EmptyStore(f"store {store.root} holds no documents")
    path = store.write_index(index)
    return IndexReport(index.doc_count(), len(index.vocabulary()), path)


Fetcher = Callable[[str], bytes]


def _file_fetcher(pages_dir: Path) -> Fetcher:
    def fetch(url: str) -> bytes:
        host = url.split("//", 1)[-1].split("/", 1)[0]
        path = pages_dir / f"{host}.html"
        return _read_bytes(path)

    return fetch


def _live_fetcher() -> Fetcher:  # pragma: no cover - network is operator opt-in
    from urllib.request import urlopen

    def fetch(url: str) -> bytes:
        with urlopen(url, timeout=30) as resp:
            return resp.read()

    return fetch


def snapshot_shops(
    store: Store,
    config: ServiceConfig,
    pages_dir: Optional[Union[str, Path]] = None,
    fetch: Optional[Fetcher] = None,
    capture_date: Optional[dt.date] = None,
) -> SnapshotReport:
    """Capture one showcase snapshot per configured shop.

    Shops that already have a snapshot for the capture date are refused
    individually; fetch or extraction failures likewise stop only that
    shop.  Pages come from ``pages_dir`` (files named ``<domain>.html``),
    an injected fetcher, or the live sites, in that order of preference.
    """
    if fetch is None:
        fetch = _file_fetcher(Path(pages_dir)) if pages_dir is not None else _live_fetcher()
    day = capture_date or _now().date()
    capture_time = dt.datetime(day.year, day.month, day.day, tzinfo=dt.timezone.utc)

    written, duplicates, failures = [], [], {}
    for shop in config.shops:
        descriptor = ShopDescriptor(shop.shop_id, shop.domain, (shop.showcase_url,))
        try:
            page = fetch(shop.showcase_url)
            snap = extract_shop_snapshot(page, descriptor, capture_time=capture_time)
            store.add_snapshot(snap)
        except DuplicateSnapshot:
            duplicates.append(shop.shop_id)
        except Exception as exc:  # noqa: BLE001 - isolate per-shop failures
            log.warning("shop %s failed: %s", shop.shop_id, exc)
            failures[shop.shop_id] = str(exc)
            continue
        else:
            written.append(shop.shop_id)
    return SnapshotReport(day, tuple(written), tuple(duplicates), MappingProxyType(failures))
