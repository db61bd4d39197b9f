"""Normalized archive format: JSON Lines, one record per line.

Each line carries a record type, the ingestion timestamp, and a payload
mirroring the corpus-model value field-for-field.  Reading an archive
and rebuilding the corpus is append-only: the first record wins on
duplicate ids, later scrapes never reconcile edits.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from decimal import Decimal
from typing import IO, Iterable, Iterator, Mapping, Optional

from ..corpus import (
    Corpus,
    Post,
    SectionNode,
    ShopListing,
    ShopSnapshot,
    Thread,
    Tweet,
    UserProfile,
    build_corpus,
    build_forum,
    to_utc,
)

__all__ = [
    "RECORD_TYPES",
    "ArchiveRecord",
    "corpus_from_records",
    "parse_iso",
    "read_archive",
    "record_for",
    "write_archive",
]

RECORD_TYPES = ("section", "thread", "post", "user", "listing_snapshot", "tweet")


def parse_iso(value: str) -> dt.datetime:
    # 3.10 fromisoformat rejects the Z suffix wire format
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    return to_utc(dt.datetime.fromisoformat(value))


@dataclass(frozen=True)
class ArchiveRecord:
    record_type: str
    payload: object
    ingested_at: dt.datetime
    forum_id: Optional[str] = None  # set for forum-scoped record types

    def __post_init__(self):
        if self.record_type not in RECORD_TYPES:
            raise ValueError(f"unknown record_type {self.record_type!r}")


def record_for(
    payload: object,
    ingested_at: dt.datetime,
    forum_id: Optional[str] = None,
) -> ArchiveRecord:
    """Wrap a corpus-model value in an ArchiveRecord of the right type."""
    kinds = {
        SectionNode: "section",
        Thread: "thread",
        Post: "post",
        UserProfile: "user",
        ShopSnapshot: "listing_snapshot",
        Tweet: "tweet",
    }
    rt = kinds.get(type(payload))
    if rt is None:
        raise TypeError(f"no record type for {type(payload).__name__}")
    return ArchiveRecord(rt, payload, to_utc(ingested_at), forum_id)


# ---------------------------------------------------------------------------
# wire format


def _payload_json(record: ArchiveRecord) -> dict:
    p = record.payload
    rt = record.record_type
    if rt == "section":
        return {"id": p.id, "name": p.name, "parent_id": p.parent_id, "depth": p.depth}
    if rt == "thread":
        return {
            "id": p.id,
            "forum_id": p.forum_id,
            "section_id": p.section_id,
            "title": p.title,
            "created_at": p.created_at.isoformat(),
        }
    if rt == "post":
        return {
            "id": p.id,
            "thread_id": p.thread_id,
            "author_id": p.author_id,
            "created_at": p.created_at.isoformat(),
            "text": p.text,
        }
    if rt == "user":
        return {
            "id": p.id,
            "forum_id": p.forum_id,
            "handle": p.handle,
            "location_raw": p.location_raw,
        }
    if rt == "listing_snapshot":
        return {
            "shop_id": p.shop_id,
            "domain": p.domain,
            "captured_at": p.captured_at.isoformat(),
            "listings": [
                {
                    "name": li.name,
                    "price": str(li.price) if li.price is not None else None,
                    "currency": li.currency,
                    "unit": li.unit,
                }
                for li in p.listings
            ],
        }
    return {
        "id": p.id,
        "created_at": p.created_at.isoformat(),
        "author_handle": p.author_handle,
        "text": p.text,
        "matched_keywords": sorted(p.matched_keywords),
    }


def _payload_value(rt: str, data: dict):
    if rt == "section":
        return SectionNode(data["id"], data["name"], data["parent_id"], data["depth"])
    if rt == "thread":
        return Thread(
            data["id"],
            data["forum_id"],
            data["section_id"],
            data["title"],
            parse_iso(data["created_at"]),
        )
    if rt == "post":
        return Post(
            data["id"],
            data["thread_id"],
            data["author_id"],
            parse_iso(data["created_at"]),
            data["text"],
        )
    if rt == "user":
        return UserProfile(data["id"], data["forum_id"], data["handle"], data["location_raw"])
    if rt == "listing_snapshot":
        return ShopSnapshot(
            data["shop_id"],
            data["domain"],
            dt.date.fromisoformat(data["captured_at"]),
            tuple(
                ShopListing(
                    li["name"],
                    Decimal(li["price"]) if li["price"] is not None else None,
                    li["currency"],
                    li["unit"],
                )
                for li in data["listings"]
            ),
        )
    return Tweet(
        data["id"],
        parse_iso(data["created_at"]),
        data["author_handle"],
        data["text"],
        frozenset(data["matched_keywords"]),
    )


def write_archive(records: Iterable[ArchiveRecord], fp: IO[str]) -> int:
    """Append records as JSON lines; returns the number written."""
    n = 0
    for rec in records:
        line = {
            "record_type": rec.record_type,
            "ingested_at": to_utc(rec.ingested_at).isoformat(),
            "payload": _payload_json(rec),
        }
        if rec.forum_id is not None:
            line["forum_id"] = rec.forum_id
        fp.write(json.dumps(line, ensure_ascii=False, sort_keys=True) + "\n")
        n += 1
    return n


def read_archive(fp: IO[str]) -> Iterator[ArchiveRecord]:
    for line in fp:
        line = line.strip()
        if not line:
            continue
        data = json.loads(line)
        rt = data["record_type"]
        yield ArchiveRecord(
            rt,
            _payload_value(rt, data["payload"]),
            parse_iso(data["ingested_at"]),
            data.get("forum_id"),
        )


# ---------------------------------------------------------------------------
# corpus assembly


def _record_id(rec: ArchiveRecord):
    p = rec.payload
    if rec.record_type == "listing_snapshot":
        return (p.shop_id, p.captured_at)
    return p.id


def dedupe_key(rec: ArchiveRecord) -> tuple:
    """Identity key under which re-ingested records count as duplicates.

    Matches the first-copy-wins rule of corpus_from_records: type, forum
    (where one applies), and record id; snapshots key on (shop, date).
    """
    fid = rec.forum_id or getattr(rec.payload, "forum_id", None)
    return (rec.record_type, fid, _record_id(rec))


def corpus_from_records(
    records: Iterable[ArchiveRecord],
    forum_names: Optional[Mapping[str, str]] = None,
) -> Corpus:
    """Group archive records by forum and rebuild a validated corpus.

    Duplicates (same record type, forum, and id) keep the first copy, so
    re-ingesting the same pages is a no-op.
    """
    names = dict(forum_names or {})
    sections: dict[str, dict] = {}
    threads: dict[str, dict] = {}
    posts: dict[str, dict] = {}
    users: dict[str, dict] = {}
    tweets: dict = {}
    snaps: dict = {}
    thread_forum: dict[str, str] = {}

    for rec in records:
        rt, p = rec.record_type, rec.payload
        if rt == "tweet":
            tweets.setdefault(p.id, p)
            continue
        if rt == "listing_snapshot":
            snaps.setdefault(_record_id(rec), p)
            continue
        fid = rec.forum_id or getattr(p, "forum_id", None)
        if rt == "post" and fid is None:
            fid = thread_forum.get(p.thread_id)
        if fid is None:
            raise ValueError(f"{rt} record {_record_id(rec)!r} lacks a forum id")
        if rt == "thread":
            thread_forum.setdefault(p.id, fid)
        bucket = {"section": sections, "thread": threads, "post": posts, "user": users}[rt]
        bucket.setdefault(fid, {}).setdefault(_record_id(rec), p)

    forums = []
    for fid in sorted(set(sections) | set(threads) | set(posts) | set(users)):
        forums.append(
            build_forum(
                fid,
                names.get(fid, fid),
                sections.get(fid, {}).values(),
                threads.get(fid, {}).values(),
                posts.get(fid, {}).values(),
                users.get(fid, {}).values(),
            )
        )
    return build_corpus(forums, tweets.values(), snaps.values())
