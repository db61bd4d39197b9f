"""Source-material ingestion: page extraction, streams, fetch scheduling."""

from .adapters import (
    FORUM_ADAPTERS,
    SHOP_ADAPTER,
    AdapterMismatch,
    MalformedPage,
    Sel,
    ShopDescriptor,
    SiteAdapter,
    extract_forum_records,
    extract_shop_snapshot,
    parse_price,
    parse_timestamp,
)
from .archive import (
    RECORD_TYPES,
    ArchiveRecord,
    corpus_from_records,
    dedupe_key,
    parse_iso,
    read_archive,
    record_for,
    write_archive,
)
from .fetch import (
    FetchEntry,
    FetchLog,
    FetchPolicy,
    HostUnreachable,
    SimulatedClock,
    WallClock,
    schedule_fetch,
)
from .html import Element, parse_html
from .links import extract_links, normalize_domain
from .stream import TweetStream, ingest_stream, match_keywords, to_tweet

__all__ = [
    "FORUM_ADAPTERS",
    "RECORD_TYPES",
    "SHOP_ADAPTER",
    "AdapterMismatch",
    "ArchiveRecord",
    "Element",
    "FetchEntry",
    "FetchLog",
    "FetchPolicy",
    "HostUnreachable",
    "MalformedPage",
    "Sel",
    "ShopDescriptor",
    "SimulatedClock",
    "SiteAdapter",
    "TweetStream",
    "WallClock",
    "corpus_from_records",
    "dedupe_key",
    "extract_forum_records",
    "extract_links",
    "extract_shop_snapshot",
    "ingest_stream",
    "match_keywords",
    "normalize_domain",
    "parse_html",
    "parse_iso",
    "parse_price",
    "parse_timestamp",
    "read_archive",
    "record_for",
    "schedule_fetch",
    "to_tweet",
    "write_archive",
]
