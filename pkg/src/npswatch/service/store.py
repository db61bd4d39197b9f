"""On-disk store: append-only archives, shop tables, index artifact.

Layout under the store root:

    archives/*.jsonl   raw ingested records, append-only, deduplicated
    shops.sqlite       shops / snapshots / listings tables
    index/terms.json   versioned index artifact, replaced atomically
    config.ini         optional service configuration

The artifact is written with sorted keys and no timestamps, so a
rebuild over unchanged data is byte-identical.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import sqlite3
import tempfile
from decimal import Decimal
from pathlib import Path
from typing import Iterable, Union

from .. import INDEX_MAGIC, INDEX_VERSION, __version__
from ..corpus import Corpus, ShopListing, ShopSnapshot, build_corpus
from ..ingest import ArchiveRecord, corpus_from_records, dedupe_key, read_archive, write_archive
from ..textindex import TermIndex

__all__ = [
    "DuplicateSnapshot",
    "EmptyStore",
    "StaleIndex",
    "Store",
    "StoreError",
]

_SCHEMA = """
CREATE TABLE IF NOT EXISTS shops (
    shop_id INTEGER PRIMARY KEY,
    domain  TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS snapshots (
    snapshot_id INTEGER PRIMARY KEY,
    shop_id     INTEGER NOT NULL REFERENCES shops(shop_id),
    captured_at TEXT NOT NULL,
    UNIQUE (shop_id, captured_at)
);
CREATE TABLE IF NOT EXISTS listings (
    listing_id  INTEGER PRIMARY KEY,
    snapshot_id INTEGER NOT NULL REFERENCES snapshots(snapshot_id) ON DELETE CASCADE,
    position    INTEGER NOT NULL,
    name        TEXT NOT NULL,
    price       TEXT,
    currency    TEXT,
    unit        TEXT
);
"""


class StoreError(Exception):
    pass


class EmptyStore(StoreError):
    """The store holds no documents to index or serve."""


class StaleIndex(StoreError):
    """The on-disk index artifact does not match this engine version."""


class DuplicateSnapshot(StoreError):
    """A snapshot for this (shop, capture date) already exists."""


class Store:
    """Handle on one store root; creates the layout on first use."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.archive_dir = self.root / "archives"
        self.index_dir = self.root / "index"
        self.db_path = self.root / "shops.sqlite"
        self.config_path = self.root / "config.ini"
        self.archive_dir.mkdir(parents=True, exist_ok=True)
        self.index_dir.mkdir(parents=True, exist_ok=True)

    @property
    def index_path(self) -> Path:
        return self.index_dir / "terms.json"

    # -- archives ------------------------------------------------------

    def archive_paths(self) -> list[Path]:
        return sorted(self.archive_dir.glob("*.jsonl"))

    def iter_records(self):
        for path in self.archive_paths():
            with path.open(encoding="utf-8") as fp:
                yield from read_archive(fp)

    def known_keys(self) -> set[tuple]:
        return {dedupe_key(rec) for rec in self.iter_records()}

    def append_records(
        self, records: Iterable[ArchiveRecord], label: str
    ) -> tuple[list[ArchiveRecord], int]:
        """Append new records to ``archives/<label>.jsonl``.

        Records whose identity key is already anywhere in the store (or
        earlier in this batch) are skipped; returns (appended, skipped).
        """
        seen = self.known_keys()
        fresh, skipped = [], 0
        for rec in records:
            key = dedupe_key(rec)
            if key in seen:
                skipped += 1
                continue
            seen.add(key)
            fresh.append(rec)
        if fresh:
            path = self.archive_dir / f"{label}.jsonl"
            with path.open("a", encoding="utf-8") as fp:
                write_archive(fresh, fp)
        return fresh, skipped

    # -- shop tables ----------------------------------------------------

    def connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.db_path)
        conn.execute("PRAGMA foreign_keys = ON")
        conn.executescript(_SCHEMA)
        return conn

    def upsert_shop(self, shop_id: int, domain: str) -> None:
        with self.connect() as conn:
            conn.execute(
                "INSERT INTO shops (shop_id, domain) VALUES (?, ?) "
                "ON CONFLICT (shop_id) DO UPDATE SET domain = excluded.domain",
                (shop_id, domain),
            )

    def add_snapshot(self, snap: ShopSnapshot) -> None:
        """Insert one snapshot with its listings; duplicates refuse."""
        with self.connect() as conn:
            conn.execute(
                "INSERT OR IGNORE INTO shops (shop_id, domain) VALUES (?, ?)",
                (snap.shop_id, snap.domain),
            )
            try:
                cur = conn.execute(
                    "INSERT INTO snapshots (shop_id, captured_at) VALUES (?, ?)",
                    (snap.shop_id, snap.captured_at.isoformat()),
                )
            except sqlite3.IntegrityError as exc:
                raise DuplicateSnapshot(
                    f"shop {snap.shop_id} already has a snapshot for {snap.captured_at}"
                ) from exc
            conn.executemany(
                "INSERT INTO listings (snapshot_id, position, name, price, currency, unit) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                [
                    (
                        cur.lastrowid,
                        i,
                        l.name,
                        None if l.price is None else str(l.price),
                        l.currency,
                        l.unit,
                    )
                    for i, l in enumerate(snap.listings)
                ],
            )

    def snapshots(self) -> tuple[ShopSnapshot, ...]:
        if not self.db_path.exists():
            return ()
        with self.connect() as conn:
            rows = conn.execute(
                "SELECT s.snapshot_id, s.shop_id, sh.domain, s.captured_at "
                "FROM snapshots s JOIN shops sh USING (shop_id) "
                "ORDER BY s.shop_id, s.captured_at"
            ).fetchall()
            out = []
            for snapshot_id, shop_id, domain, captured in rows:
                listings = tuple(
                    ShopListing(
                        name,
                        None if price is None else Decimal(price),
                        currency,
                        unit,
                    )
                    for name, price, currency, unit in conn.execute(
                        "SELECT name, price, currency, unit FROM listings "
                        "WHERE snapshot_id = ? ORDER BY position",
                        (snapshot_id,),
                    )
                )
                out.append(ShopSnapshot(shop_id, domain, dt.date.fromisoformat(captured), listings))
        return tuple(out)

    def shop_domains(self) -> dict[int, str]:
        if not self.db_path.exists():
            return {}
        with self.connect() as conn:
            return dict(conn.execute("SELECT shop_id, domain FROM shops ORDER BY shop_id"))

    # -- corpus ----------------------------------------------------------

    def load_corpus(self, forum_names=None) -> Corpus:
        """Rebuild the corpus from archives plus the shop tables."""
        records = list(self.iter_records())
        snaps = self.snapshots()
        if not records and not snaps:
            raise EmptyStore(f"no records under {self.root}")
        corpus = corpus_from_records(records, forum_names)
        if snaps:
            corpus = build_corpus(corpus.forums.values(), corpus.tweets, snaps)
        return corpus

    # -- index artifact ---------------------------------------------------

    def write_index(self, index: TermIndex) -> Path:
        """Serialize the index, replacing any previous artifact atomically."""
        envelope = {
            "magic": INDEX_MAGIC,
            "version": INDEX_VERSION,
            "engine": __version__,
            "index": index.to_payload(),
        }
        blob = json.dumps(envelope, sort_keys=True, separators=(",", ":"))
        fd, tmp = tempfile.mkstemp(dir=self.index_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fp:
                fp.write(blob)
                fp.flush()
                os.fsync(fp.fileno())
            os.replace(tmp, self.index_path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return self.index_path

    def load_index(self) -> TermIndex:
        if not self.index_path.exists():
            raise EmptyStore(f"no index artifact under {self.index_dir}; run the index command")
        with self.index_path.open(encoding="utf-8") as fp:
            envelope = json.load(fp)
        if envelope.get("magic") != INDEX_MAGIC:
            raise StaleIndex(f"{self.index_path} is not an index artifact")
        found = (envelope.get("version"), envelope.get("engine"))
        if found != (INDEX_VERSION, __version__):
            raise StaleIndex(
                f"artifact {found[0]}/{found[1]} does not match engine "
                f"{INDEX_VERSION}/{__version__}; rebuild the index"
            )
        return TermIndex.from_payload(envelope["index"])
