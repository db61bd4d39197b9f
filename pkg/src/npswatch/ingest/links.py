"""URL extraction from free text.

Domains are reported as the host with scheme, port, and a leading
"www." stripped, which is the shape shop domains are configured in, so
overlap reports can compare the two sets directly.
"""

from __future__ import annotations

import re
from urllib.parse import urlsplit

__all__ = ["extract_links", "normalize_domain"]

# candidate = scheme up to whitespace or markup; trailing punctuation is
# trimmed afterwards so "see http://a.b/p." keeps its url intact
_URL_RE = re.compile(r"https?://[^\s<>\"']+", re.IGNORECASE)
_TRAILING = ".,;:!?)]}'\""


def normalize_domain(host: str) -> str:
    host = host.strip().casefold().rstrip(".")
    if host.startswith("www."):
        host = host[4:]
    return host


def extract_links(text: str) -> list[tuple[str, str]]:
    """Absolute http/https URLs in ``text`` as (url, domain) pairs.

    Malformed candidates are skipped; duplicates are kept (callers
    dedupe at whatever level they report on).

    >>> extract_links("buy at https://www.iceheadshop.co.uk/x now")
    [('https://www.iceheadshop.co.uk/x', 'iceheadshop.co.uk')]
    >>> extract_links("no links here")
    []
    """
    out = []
    for m in _URL_RE.finditer(text):
        url = m.group(0).rstrip(_TRAILING)
        try:
            host = urlsplit(url).hostname
        except ValueError:
            continue
        if not host:
            continue
        out.append((url, normalize_domain(host)))
    return out
