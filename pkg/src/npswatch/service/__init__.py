"""Persistence, HTTP/JSON API, and command line."""

from .api import ApiError, Generation, GenerationHolder, create_app, load_generation
from .config import DEFAULT_SHOPS, ConfigError, ServiceConfig, ShopEntry, load_config
from .ops import (
    IndexReport,
    IngestReport,
    IoFailure,
    SnapshotReport,
    UnknownAdapter,
    cli_index,
    cli_ingest,
    corpus_records,
    snapshot_shops,
)
from .store import DuplicateSnapshot, EmptyStore, StaleIndex, Store, StoreError

__all__ = [
    "ApiError",
    "ConfigError",
    "DEFAULT_SHOPS",
    "DuplicateSnapshot",
    "EmptyStore",
    "Generation",
    "GenerationHolder",
    "IndexReport",
    "IngestReport",
    "IoFailure",
    "ServiceConfig",
    "ShopEntry",
    "SnapshotReport",
    "StaleIndex",
    "Store",
    "StoreError",
    "UnknownAdapter",
    "cli_index",
    "cli_ingest",
    "corpus_records",
    "create_app",
    "load_config",
    "load_generation",
    "snapshot_shops",
]
