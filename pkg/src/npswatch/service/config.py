"""Service configuration: INI file with shop table and crawl settings.

Everything has a default; an absent file yields the stock setup of ten
monitored shops, lexicon-derived stream keywords, and the standard
source priority.  Example:

    [shops]
    1 = chem-shop.co.uk
    2 = researchchemist.co.uk

    [stream]
    keywords = keywords.txt

    [sources]
    priority = forum-bl, forum-df, tweets

    [fetch]
    min_delay_per_host = 2.0
    max_concurrent_hosts = 4
    max_retries = 2
    revisit_days = 7
"""

from __future__ import annotations

import configparser
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..analytics import load_lexicon
from ..corpus import DEFAULT_SOURCE_PRIORITY
from ..ingest import FetchPolicy

__all__ = ["DEFAULT_SHOPS", "ConfigError", "ServiceConfig", "ShopEntry", "load_config"]

# shop_id -> registrable domain of the ten monitored shops
DEFAULT_SHOPS = (
    (1, "chem-shop.co.uk"),
    (2, "researchchemist.co.uk"),
    (3, "researchchemistry.co.uk"),
    (4, "sciencesuppliesdirect.com"),
    (5, "bitcoinhighs.co.uk"),
    (6, "buylegalrc.eu"),
    (7, "legalhighlabs.com"),
    (8, "ukhighs.com"),
    (9, "buyanychem.eu"),
    (10, "iceheadshop.co.uk"),
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ShopEntry:
    shop_id: int
    domain: str

    @property
    def showcase_url(self) -> str:
        return f"https://{self.domain}/"


@dataclass(frozen=True)
class ServiceConfig:
    shops: tuple[ShopEntry, ...]
    keywords: frozenset[str]
    source_priority: tuple[str, ...]
    fetch: FetchPolicy


def _default_keywords() -> frozenset[str]:
    words = set()
    for entry in load_lexicon():
        words.update(entry.aliases)
    return frozenset(words)


def load_config(path: Optional[Union[str, Path]] = None) -> ServiceConfig:
    """Read configuration, falling back to defaults for absent parts."""
    parser = configparser.ConfigParser()
    base: Optional[Path] = None
    if path is not None:
        path = Path(path)
        if path.exists():
            parser.read(path, encoding="utf-8")
            base = path.parent

    if parser.has_section("shops"):
        try:
            shops = tuple(
                ShopEntry(int(key), value.strip())
                for key, value in parser.items("shops")
            )
        except ValueError as exc:
            raise ConfigError(f"shop ids must be integers: {exc}") from exc
        if len({s.shop_id for s in shops}) != len(shops):
            raise ConfigError("duplicate shop id in [shops]")
        shops = tuple(sorted(shops, key=lambda s: s.shop_id))
    else:
        shops = tuple(ShopEntry(i, d) for i, d in DEFAULT_SHOPS)

    keywords_file = parser.get("stream", "keywords", fallback=None)
    if keywords_file:
        kw_path = Path(keywords_file)
        if base is not None and not kw_path.is_absolute():
            kw_path = base / kw_path
        try:
            lines = kw_path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read keyword list {kw_path}: {exc}") from exc
        keywords = frozenset(
            line.strip().casefold()
            for line in lines
            if line.strip() and not line.lstrip().startswith("#")
        )
        if not keywords:
            raise ConfigError(f"keyword list {kw_path} is empty")
    else:
        keywords = _default_keywords()

    priority_raw = parser.get("sources", "priority", fallback=None)
    if priority_raw:
        priority = tuple(part.strip() for part in priority_raw.split(",") if part.strip())
        if not priority:
            raise ConfigError("[sources] priority is empty")
    else:
        priority = DEFAULT_SOURCE_PRIORITY

    try:
        fetch = FetchPolicy(
            min_delay_per_host=parser.getfloat("fetch", "min_delay_per_host", fallback=2.0),
            max_concurrent_hosts=parser.getint("fetch", "max_concurrent_hosts", fallback=4),
            max_retries=parser.getint("fetch", "max_retries", fallback=2),
            revisit_interval=dt.timedelta(
                days=parser.getint("fetch", "revisit_days", fallback=7)
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"bad [fetch] settings: {exc}") from exc

    return ServiceConfig(shops, keywords, priority, fetch)
