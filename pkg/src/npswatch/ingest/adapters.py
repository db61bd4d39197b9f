"""Declarative per-site extraction.

An adapter is a table of (tag, class) selectors and patterns; the
extraction drivers below are generic.  Two forum dialects and a shop
dialect ship as defaults, shaped like the fixture page dumps; new sites
mean new tables, not new code.

Error split: a page without the adapter's landmarks is the wrong page
for this adapter (AdapterMismatch, raised); a recognized page with one
broken record skips that record and logs (MalformedPage is the internal
signal).
"""

from __future__ import annotations

import datetime as dt
import logging
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Optional, Union

from ..corpus import (
    Post,
    SectionNode,
    ShopListing,
    ShopSnapshot,
    Thread,
    UserProfile,
    to_utc,
)
from .archive import ArchiveRecord, parse_iso, record_for
from .html import Element, parse_html

__all__ = [
    "AdapterMismatch",
    "MalformedPage",
    "Sel",
    "SiteAdapter",
    "ShopDescriptor",
    "FORUM_ADAPTERS",
    "SHOP_ADAPTER",
    "extract_forum_records",
    "extract_shop_snapshot",
    "parse_timestamp",
    "parse_price",
]

log = logging.getLogger(__name__)


class AdapterMismatch(ValueError):
    """The page lacks the adapter's landmarks."""


class MalformedPage(ValueError):
    """A recognized region fails to parse; the record is skipped."""


@dataclass(frozen=True)
class Sel:
    tag: str
    cls: Optional[str] = None

    def all(self, root: Element) -> list[Element]:
        return root.find_all(self.tag, self.cls)

    def first(self, root: Element) -> Optional[Element]:
        return root.find(self.tag, self.cls)


@dataclass(frozen=True)
class SiteAdapter:
    """Extraction rules for one site (forum or shop dialect)."""

    name: str
    source_kind: str  # "forum" | "shop"
    forum_id: Optional[str] = None
    landmark: Sel = Sel("body")
    # breadcrumb trail: anchors carrying the section path of the page
    breadcrumb: Sel = Sel("nav", "breadcrumb")
    crumb_link: Sel = Sel("a")
    id_pattern: str = r"(?P<id>[\w.-]+)/?$"  # applied to hrefs
    # section-index pages
    section_item: Sel = Sel("div", "node")
    section_link: Sel = Sel("a", "node-title")
    # thread pages
    thread_block: Sel = Sel("div", "thread")
    thread_title: Sel = Sel("h1", "thread-title")
    post_block: Sel = Sel("article", "message")
    post_author: Sel = Sel("a", "username")
    post_time: Sel = Sel("time", None)
    post_body: Sel = Sel("div", "message-body")
    post_id_attr: str = "data-post-id"
    # member pages
    member_block: Sel = Sel("div", "member-profile")
    member_handle: Sel = Sel("span", "member-name")
    member_location: Sel = Sel("span", "member-location")
    member_id_attr: str = "data-user-id"
    # absolute timestamp formats tried in order
    time_formats: tuple[str, ...] = ("%d-%m-%Y, %H:%M", "%Y-%m-%d %H:%M")
    # shop pages
    listing_block: Sel = Sel("div", "product-card")
    listing_name: Sel = Sel("span", "product-name")
    listing_price: Sel = Sel("span", "product-price")


@dataclass(frozen=True)
class ShopDescriptor:
    shop_id: int
    domain: str
    showcase_urls: tuple[str, ...] = ()


# the two monitored forums speak different markup dialects
FORUM_ADAPTERS = {
    "forum-bl": SiteAdapter(
        name="bluelight",
        source_kind="forum",
        forum_id="forum-bl",
        landmark=Sel("div", "bl-page"),
        breadcrumb=Sel("ul", "crumbs"),
        crumb_link=Sel("a", "crumb"),
        id_pattern=r"/(?:forums|threads)/(?P<id>[\w.-]+)/?$",
        section_item=Sel("li", "forum-node"),
        section_link=Sel("a", "forum-link"),
        thread_block=Sel("div", "thread-view"),
        thread_title=Sel("h1", "thread-title"),
        post_block=Sel("div", "post"),
        post_author=Sel("a", "post-author"),
        post_time=Sel("span", "post-date"),
        post_body=Sel("div", "post-body"),
        post_id_attr="data-post",
        member_block=Sel("div", "profile-card"),
        member_handle=Sel("h2", "profile-name"),
        member_location=Sel("dd", "profile-location"),
        member_id_attr="data-member",
        time_formats=("%d-%m-%Y, %H:%M",),
    ),
    "forum-df": SiteAdapter(
        name="drugsforum",
        source_kind="forum",
        forum_id="forum-df",
        landmark=Sel("main", "df-layout"),
        breadcrumb=Sel("nav", "breadcrumb"),
        crumb_link=Sel("a"),
        id_pattern=r"[?&](?:f|t)=(?P<id>\w+)$",
        section_item=Sel("td", "subforum"),
        section_link=Sel("a", "subforum-title"),
        thread_block=Sel("table", "thread-posts"),
        thread_title=Sel("span", "thread-subject"),
        post_block=Sel("tr", "post-row"),
        post_author=Sel("span", "author"),
        post_time=Sel("td", "postdate"),
        post_body=Sel("td", "post-content"),
        post_id_attr="id",
        member_block=Sel("div", "userinfo"),
        member_handle=Sel("span", "username"),
        member_location=Sel("span", "userfield-location"),
        member_id_attr="data-uid",
        time_formats=("%Y-%m-%d %H:%M", "%d %b %Y, %H:%M"),
    ),
}

SHOP_ADAPTER = SiteAdapter(
    name="shop-showcase",
    source_kind="shop",
    landmark=Sel("div", "showcase"),
    listing_block=Sel("div", "product-card"),
    listing_name=Sel("span", "product-name"),
    listing_price=Sel("span", "product-price"),
)


# ---------------------------------------------------------------------------
# timestamp and price grammars

_RELATIVE_RE = re.compile(r"^(\d+)\s+(minute|hour|day|week)s?\s+ago$")
_DAYWORD_RE = re.compile(r"^(today|yesterday)(?:,?\s+(\d{1,2}):(\d{2}))?$")
_UNIT_SECONDS = {"minute": 60, "hour": 3600, "day": 86400, "week": 604800}


def parse_timestamp(
    text: str,
    capture_time: dt.datetime,
    formats: tuple[str, ...] = (),
) -> dt.datetime:
    """Forum timestamp grammar: ISO, dialect formats, or relative.

    Relative stamps ("2 hours ago", "yesterday, 14:02") resolve against
    the page capture time, since that is the only clock they reference.
    """
    raw = " ".join(text.split())
    low = raw.casefold()
    m = _RELATIVE_RE.match(low)
    if m:
        delta = int(m.group(1)) * _UNIT_SECONDS[m.group(2)]
        return to_utc(capture_time) - dt.timedelta(seconds=delta)
    m = _DAYWORD_RE.match(low)
    if m:
        base = to_utc(capture_time)
        day = base.date() - dt.timedelta(days=1 if m.group(1) == "yesterday" else 0)
        hh, mm = (int(m.group(2)), int(m.group(3))) if m.group(2) else (0, 0)
        return dt.datetime(day.year, day.month, day.day, hh, mm, tzinfo=dt.timezone.utc)
    for fmt in formats:
        try:
            return to_utc(dt.datetime.strptime(raw, fmt))
        except ValueError:
            continue
    try:
        return parse_iso(raw)
    except ValueError:
        raise MalformedPage(f"unparseable timestamp {raw!r}") from None


_CURRENCY_SYMBOLS = {"£": "GBP", "€": "EUR", "$": "USD"}
_PRICE_RE = re.compile(
    r"(?P<sym>[£€$])?\s*(?P<amount>\d+(?:\.\d+)?)\s*(?P<code>GBP|EUR|USD)?",
    re.IGNORECASE,
)
_UNIT_RE = re.compile(r"\b(\d+(?:\.\d+)?\s*(?:mg|g|kg|ml|oz)|\d+\s*(?:pills?|tabs?|blotters?))\b", re.IGNORECASE)


def parse_price(text: str) -> tuple[Optional[Decimal], Optional[str]]:
    """(amount, ISO currency) from a price fragment; (None, None) if absent."""
    m = _PRICE_RE.search(text)
    if not m or not m.group("amount"):
        return None, None
    try:
        amount = Decimal(m.group("amount"))
    except InvalidOperation:
        return None, None
    currency = None
    if m.group("sym"):
        currency = _CURRENCY_SYMBOLS[m.group("sym")]
    elif m.group("code"):
        currency = m.group("code").upper()
    return amount, currency


# ---------------------------------------------------------------------------
# forum extraction


def _capture_time(doc: Element, fallback: Optional[dt.datetime]) -> dt.datetime:
    meta = next(
        (el for el in doc.find_all("meta") if el.get("name") == "capture-date"),
        None,
    )
    if meta is not None and meta.get("content"):
        return parse_iso(meta.get("content"))
    if fallback is not None:
        return to_utc(fallback)
    raise MalformedPage("page carries no capture-date and no fallback was given")


def _href_id(adapter: SiteAdapter, el: Element) -> str:
    href = el.get("href") or ""
    m = re.search(adapter.id_pattern, href)
    if not m:
        raise MalformedPage(f"href {href!r} does not match the id pattern")
    return m.group("id")


def _crumb_trail(adapter: SiteAdapter, doc: Element) -> list[tuple[str, str]]:
    """Breadcrumb as [(section_id, name)] from the page top, root first."""
    nav = adapter.breadcrumb.first(doc)
    if nav is None:
        raise AdapterMismatch(f"{adapter.name}: no breadcrumb trail")
    trail = []
    for a in adapter.crumb_link.all(nav):
        name = a.text()
        if not name:
            continue
        trail.append((_href_id(adapter, a), name))
    if not trail:
        raise AdapterMismatch(f"{adapter.name}: empty breadcrumb trail")
    return trail


def _section_records(
    adapter: SiteAdapter,
    trail: list[tuple[str, str]],
    ingested_at: dt.datetime,
) -> list[ArchiveRecord]:
    records = []
    parent: Optional[str] = None
    for depth, (sid, name) in enumerate(trail):
        records.append(
            record_for(SectionNode(sid, name, parent, depth), ingested_at, adapter.forum_id)
        )
        parent = sid
    return records


def extract_forum_records(
    page: Union[bytes, str],
    adapter: SiteAdapter,
    capture_time: Optional[dt.datetime] = None,
) -> list[ArchiveRecord]:
    """Records from one forum page dump (section index, thread, or
    member page, auto-detected).

    Section records always precede the posts extracted under them.
    Broken individual records are skipped and logged; a page without the
    adapter's landmarks raises AdapterMismatch.
    """
    if adapter.source_kind != "forum":
        raise ValueError(f"{adapter.name} is not a forum adapter")
    doc = parse_html(page)
    if adapter.landmark.first(doc) is None:
        raise AdapterMismatch(f"{adapter.name}: landmark {adapter.landmark} absent")
    captured = _capture_time(doc, capture_time)

    member = adapter.member_block.first(doc)
    if member is not None:
        return _member_records(adapter, member, captured)

    trail = _crumb_trail(adapter, doc)
    records = _section_records(adapter, trail, captured)
    section_id = trail[-1][0]

    thread_el = adapter.thread_block.first(doc)
    if thread_el is not None:
        records.extend(_thread_records(adapter, thread_el, section_id, captured))
        return records

    for item in adapter.section_item.all(doc):
        link = adapter.section_link.first(item)
        if link is None:
            continue
        try:
            sid = _href_id(adapter, link)
        except MalformedPage as exc:
            log.warning("%s: subsection skipped: %s", adapter.name, exc)
            continue
        name = link.text()
        if not name:
            log.warning("%s: nameless subsection %r skipped", adapter.name, sid)
            continue
        records.append(
            record_for(
                SectionNode(sid, name, section_id, len(trail)), captured, adapter.forum_id
            )
        )
    if len(records) == len(trail):
        # neither thread nor subsections: a bare page is not this adapter's
        raise AdapterMismatch(f"{adapter.name}: no thread or section content")
    return records


def _thread_records(
    adapter: SiteAdapter,
    thread_el: Element,
    section_id: str,
    captured: dt.datetime,
) -> list[ArchiveRecord]:
    title_el = adapter.thread_title.first(thread_el)
    thread_id = thread_el.get("data-thread-id") or (
        title_el is not None and _maybe_href_id(adapter, title_el)
    )
    if title_el is None or not title_el.text() or not thread_id:
        log.warning("%s: thread block without title/id; page posts skipped", adapter.name)
        return []
    title = title_el.text()

    posts = []
    for block in adapter.post_block.all(thread_el):
        try:
            posts.append(_one_post(adapter, block, thread_id, captured))
        except MalformedPage as exc:
            log.warning("%s: post skipped: %s", adapter.name, exc)
    if not posts:
        log.warning("%s: thread %r has no readable posts", adapter.name, thread_id)
        return []
    created = min(p.created_at for p in posts)
    records = [
        record_for(
            Thread(thread_id, adapter.forum_id, section_id, title, created),
            captured,
            adapter.forum_id,
        )
    ]
    records.extend(record_for(p, captured, adapter.forum_id) for p in posts)
    return records


def _maybe_href_id(adapter: SiteAdapter, el: Element) -> Optional[str]:
    link = el if el.get("href") else el.find("a")
    if link is None:
        return None
    try:
        return _href_id(adapter, link)
    except MalformedPage:
        return None


def _one_post(
    adapter: SiteAdapter,
    block: Element,
    thread_id: str,
    captured: dt.datetime,
) -> Post:
    post_id = block.get(adapter.post_id_attr)
    if not post_id:
        raise MalformedPage(f"post without {adapter.post_id_attr!r}")
    author_el = adapter.post_author.first(block)
    if author_el is None or not author_el.text():
        raise MalformedPage(f"post {post_id!r} has no author")
    time_el = adapter.post_time.first(block)
    if time_el is None:
        raise MalformedPage(f"post {post_id!r} has no timestamp")
    stamp = time_el.get("datetime") or time_el.text()
    when = parse_timestamp(stamp, captured, adapter.time_formats)
    body_el = adapter.post_body.first(block)
    if body_el is None:
        raise MalformedPage(f"post {post_id!r} has no body")
    author = author_el.text()
    return Post(post_id, thread_id, author.casefold(), when, body_el.text())


def _member_records(
    adapter: SiteAdapter,
    member: Element,
    captured: dt.datetime,
) -> list[ArchiveRecord]:
    uid = member.get(adapter.member_id_attr)
    handle_el = adapter.member_handle.first(member)
    if not uid or handle_el is None or not handle_el.text():
        log.warning("%s: member page without id/handle; skipped", adapter.name)
        return []
    loc_el = adapter.member_location.first(member)
    location = loc_el.text() if loc_el is not None and loc_el.text() else None
    profile = UserProfile(uid, adapter.forum_id, handle_el.text(), location)
    return [record_for(profile, captured, adapter.forum_id)]


# ---------------------------------------------------------------------------
# shop extraction


def extract_shop_snapshot(
    page: Union[bytes, str],
    shop: ShopDescriptor,
    adapter: SiteAdapter = SHOP_ADAPTER,
    capture_time: Optional[dt.datetime] = None,
) -> ShopSnapshot:
    """One dated snapshot of a shop showcase page.

    A showcase with zero readable listings is flagged in the log and
    returned with an empty listing tuple rather than dropped, so the
    capture date still lands in the store.
    """
    if adapter.source_kind != "shop":
        raise ValueError(f"{adapter.name} is not a shop adapter")
    doc = parse_html(page)
    if adapter.landmark.first(doc) is None:
        raise AdapterMismatch(f"{adapter.name}: landmark absent")
    captured = _capture_time(doc, capture_time)

    listings = []
    for card in adapter.listing_block.all(doc):
        name_el = adapter.listing_name.first(card)
        if name_el is None or not name_el.text().strip():
            log.warning("shop %s: nameless product card skipped", shop.shop_id)
            continue
        price_el = adapter.listing_price.first(card)
        price, currency = parse_price(price_el.text()) if price_el is not None else (None, None)
        unit_m = _UNIT_RE.search(name_el.text())
        listings.append(
            ShopListing(
                name_el.text().strip(),
                price,
                currency,
                unit_m.group(1) if unit_m else None,
            )
        )
    if not listings:
        log.warning("shop %s: empty showcase at %s", shop.shop_id, captured.date())
    return ShopSnapshot(shop.shop_id, shop.domain, captured.date(), tuple(listings))
