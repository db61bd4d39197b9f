"""Unified corpus model for the three source families.

Forums are trees of sections holding threads and posts, shops are dated
showcase snapshots, the microblog stream is a flat list of
keyword-matched tweets.  Everything here is immutable after
construction; builders validate structural invariants once and readers
never need locks.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from decimal import Decimal
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .tokens import tokenize

# Source tags. The model is extensible by string tag; these four are the
# ones the engine ships adapters and fixtures for.
FORUM_BL = "forum-bl"
FORUM_DF = "forum-df"
SHOP = "shop"
MICROBLOG = "microblog"

GRANULARITIES = ("day", "week", "month")
DEFAULT_GRANULARITY = "month"

# Default tie-break order for first-seen attribution.
DEFAULT_SOURCE_PRIORITY = (FORUM_BL, FORUM_DF, MICROBLOG, SHOP)


class CorpusError(ValueError):
    """A value violates a structural corpus invariant."""


def to_utc(ts: dt.datetime) -> dt.datetime:
    """Normalize a timestamp to timezone-aware UTC.

    Naive datetimes are taken to already be UTC (ingestion converts
    source-local times before records reach the model).
    """
    if ts.tzinfo is None:
        return ts.replace(tzinfo=dt.timezone.utc)
    return ts.astimezone(dt.timezone.utc)


def midnight_utc(day: dt.date) -> dt.datetime:
    return dt.datetime(day.year, day.month, day.day, tzinfo=dt.timezone.utc)


# ---------------------------------------------------------------------------
# time buckets


@dataclass(frozen=True, order=True)
class TimeBucket:
    """A calendar-aligned UTC time interval: one day, ISO week, or month."""

    granularity: str
    start: dt.date

    def next_start(self) -> dt.date:
        if self.granularity == "day":
            return self.start + dt.timedelta(days=1)
        if self.granularity == "week":
            return self.start + dt.timedelta(days=7)
        y, m = divmod(self.start.month, 12)
        return dt.date(self.start.year + y, m + 1, 1)


def bucket_of(ts: Union[dt.datetime, dt.date], granularity: str = DEFAULT_GRANULARITY) -> TimeBucket:
    """Return the bucket containing ``ts``; buckets partition the timeline."""
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}, got {granularity!r}")
    if isinstance(ts, dt.datetime):
        day = to_utc(ts).date()
    else:
        day = ts
    if granularity == "day":
        start = day
    elif granularity == "week":
        start = day - dt.timedelta(days=day.weekday())  # ISO Monday
    else:
        start = day.replace(day=1)
    return TimeBucket(granularity, start)


def bucket_range(first: dt.datetime, last: dt.datetime, granularity: str) -> list[TimeBucket]:
    """Contiguous buckets covering [first, last], inclusive on both ends."""
    lo = bucket_of(first, granularity)
    hi = bucket_of(last, granularity)
    if hi < lo:
        raise ValueError("last precedes first")
    out = [lo]
    while out[-1] < hi:
        out.append(TimeBucket(granularity, out[-1].next_start()))
    return out


# ---------------------------------------------------------------------------
# forum side


@dataclass(frozen=True)
class SectionNode:
    id: str
    name: str
    parent_id: Optional[str]
    depth: int
    children: tuple[str, ...] = ()


@dataclass(frozen=True)
class Thread:
    id: str
    forum_id: str
    section_id: str
    title: str
    created_at: dt.datetime


@dataclass(frozen=True)
class Post:
    id: str
    thread_id: str
    author_id: str
    created_at: dt.datetime
    text: str


@dataclass(frozen=True)
class UserProfile:
    id: str
    forum_id: str
    handle: str
    location_raw: Optional[str] = None
    post_count: int = 0  # derived at corpus build


@dataclass(frozen=True)
class Forum:
    """One forum: a rooted section tree plus its threads, posts, users."""

    id: str
    name: str
    root_id: str
    sections: Mapping[str, SectionNode]
    threads: Mapping[str, Thread]
    posts: tuple[Post, ...]
    users: Mapping[str, UserProfile]

    def descendants(self, section_id: str) -> list[str]:
        """Section ids of the subtree rooted at ``section_id``, preorder."""
        if section_id not in self.sections:
            raise KeyError(section_id)
        out = []
        stack = [section_id]
        while stack:
            sid = stack.pop()
            out.append(sid)
            stack.extend(reversed(self.sections[sid].children))
        return out

    def sections_at_depth(self, depth: int) -> list[str]:
        """Section ids at exactly ``depth``, in tree (preorder) order."""
        return [sid for sid in self.descendants(self.root_id)
                if self.sections[sid].depth == depth]


def build_forum(
    forum_id: str,
    name: str,
    sections: Iterable[SectionNode],
    threads: Iterable[Thread],
    posts: Iterable[Post],
    users: Iterable[UserProfile] = (),
) -> Forum:
    """Assemble and validate a Forum; recomputes derived user post counts.

    Children orderings are taken from the section records when present
    and otherwise derived from section insertion order.
    """
    by_id: dict[str, SectionNode] = {}
    for node in sections:
        if node.id in by_id:
            raise CorpusError(f"{forum_id}: duplicate section id {node.id!r}")
        by_id[node.id] = node

    roots = [n for n in by_id.values() if n.parent_id is None]
    if len(roots) != 1:
        raise CorpusError(f"{forum_id}: expected exactly one root section, got {len(roots)}")
    root = roots[0]
    if root.depth != 0:
        raise CorpusError(f"{forum_id}: root section depth must be 0")

    child_order: dict[str, list[str]] = {sid: [] for sid in by_id}
    for node in by_id.values():
        if node.parent_id is None:
            continue
        parent = by_id.get(node.parent_id)
        if parent is None:
            raise CorpusError(f"{forum_id}: section {node.id!r} has unknown parent {node.parent_id!r}")
        if node.depth != parent.depth + 1:
            raise CorpusError(f"{forum_id}: section {node.id!r} depth {node.depth} != parent depth + 1")
        child_order[node.parent_id].append(node.id)

    normalized = {
        sid: SectionNode(n.id, n.name, n.parent_id, n.depth, tuple(child_order[sid]))
        for sid, n in by_id.items()
    }

    # Reachability: a single root plus valid parent links of strictly
    # increasing depth already rules out cycles; confirm the edge count.
    reachable = set()
    stack = [root.id]
    while stack:
        sid = stack.pop()
        reachable.add(sid)
        stack.extend(normalized[sid].children)
    if reachable != set(normalized):
        raise CorpusError(f"{forum_id}: {len(normalized) - len(reachable)} section(s) unreachable from root")

    thread_map: dict[str, Thread] = {}
    for th in threads:
        if th.forum_id != forum_id:
            raise CorpusError(f"thread {th.id!r} belongs to forum {th.forum_id!r}, not {forum_id!r}")
        if th.id in thread_map:
            raise CorpusError(f"{forum_id}: duplicate thread id {th.id!r}")
        if th.section_id not in normalized:
            raise CorpusError(f"{forum_id}: thread {th.id!r} references unknown section {th.section_id!r}")
        thread_map[th.id] = Thread(th.id, th.forum_id, th.section_id, th.title, to_utc(th.created_at))

    seen_posts = set()
    post_list = []
    counts: dict[str, int] = {}
    for p in posts:
        if p.id in seen_posts:
            raise CorpusError(f"{forum_id}: duplicate post id {p.id!r}")
        seen_posts.add(p.id)
        if p.thread_id not in thread_map:
            raise CorpusError(f"{forum_id}: post {p.id!r} references unknown thread {p.thread_id!r}")
        post_list.append(Post(p.id, p.thread_id, p.author_id, to_utc(p.created_at), p.text))
        counts[p.author_id] = counts.get(p.author_id, 0) + 1
    post_list.sort(key=lambda p: (p.created_at, p.id))

    user_map: dict[str, UserProfile] = {}
    for u in users:
        if u.forum_id != forum_id:
            raise CorpusError(f"user {u.id!r} belongs to forum {u.forum_id!r}, not {forum_id!r}")
        if u.id in user_map:
            raise CorpusError(f"{forum_id}: duplicate user id {u.id!r}")
        user_map[u.id] = UserProfile(u.id, u.forum_id, u.handle, u.location_raw, counts.get(u.id, 0))
    # posts may cite authors without a scraped profile page; synthesize
    # a bare profile so post_count bookkeeping stays total
    for author_id, n in counts.items():
        if author_id not in user_map:
            user_map[author_id] = UserProfile(author_id, forum_id, author_id, None, n)

    return Forum(
        id=forum_id,
        name=name,
        root_id=root.id,
        sections=MappingProxyType(normalized),
        threads=MappingProxyType(thread_map),
        posts=tuple(post_list),
        users=MappingProxyType(user_map),
    )


# ---------------------------------------------------------------------------
# microblog and shop sides


@dataclass(frozen=True)
class Tweet:
    id: str
    created_at: dt.datetime
    author_handle: str
    text: str
    matched_keywords: frozenset[str]


@dataclass(frozen=True)
class ShopListing:
    name: str
    price: Optional[Decimal] = None
    currency: Optional[str] = None
    unit: Optional[str] = None


@dataclass(frozen=True)
class ShopSnapshot:
    shop_id: int
    domain: str
    captured_at: dt.date
    listings: tuple[ShopListing, ...]


@dataclass(frozen=True)
class SubstanceEntry:
    """A monitored substance: canonical name plus case-insensitive aliases."""

    canonical_name: str
    aliases: frozenset[str]

    @classmethod
    def of(cls, canonical_name: str, *aliases: str) -> "SubstanceEntry":
        folded = {a.casefold() for a in aliases}
        folded.add(canonical_name.casefold())
        return cls(canonical_name, frozenset(folded))

    def alias_token_seqs(self) -> frozenset[tuple[str, ...]]:
        """Aliases as grammar-token sequences (multi-word aliases allowed)."""
        return frozenset(tuple(tokenize(a)) for a in self.aliases if tokenize(a))


def alias_matches(text: Union[str, Sequence[str]], entry: SubstanceEntry) -> bool:
    """True iff any alias of ``entry`` occurs in ``text`` as whole tokens.

    ``text`` may be raw (tokenized here) or an already-tokenized
    sequence.  Matching is token-exact: "lsd" inside "1p-lsd" is one
    token and never a hit for plain lsd.
    """
    toks = tokenize(text) if isinstance(text, str) else list(text)
    if not toks:
        return False
    tokset = set(toks)
    for seq in entry.alias_token_seqs():
        if len(seq) == 1:
            if seq[0] in tokset:
                return True
        elif len(seq) <= len(toks):
            for i in range(len(toks) - len(seq) + 1):
                if tuple(toks[i:i + len(seq)]) == seq:
                    return True
    return False


# ---------------------------------------------------------------------------
# whole corpus


@dataclass(frozen=True)
class Document:
    """Flat view of one indexable text unit, any source."""

    doc_id: str
    source: str
    section_id: Optional[str]
    created_at: dt.datetime
    text: str


@dataclass(frozen=True)
class Corpus:
    forums: Mapping[str, Forum]
    tweets: tuple[Tweet, ...]
    shops: Mapping[int, tuple[ShopSnapshot, ...]]

    def sources(self) -> list[str]:
        out = list(self.forums)
        if self.tweets:
            out.append(MICROBLOG)
        if self.shops:
            out.append(SHOP)
        return out

    def documents(self) -> Iterator[Document]:
        """Every indexable document: posts, tweets, listing names."""
        for forum in self.forums.values():
            for post in forum.posts:
                section = forum.threads[post.thread_id].section_id
                yield Document(f"{forum.id}:{post.id}", forum.id, section, post.created_at, post.text)
        for tw in self.tweets:
            yield Document(f"{MICROBLOG}:{tw.id}", MICROBLOG, None, tw.created_at, tw.text)
        for shop_id, snaps in self.shops.items():
            for snap in snaps:
                when = midnight_utc(snap.captured_at)
                for pos, listing in enumerate(snap.listings):
                    doc_id = f"{SHOP}:{shop_id}:{snap.captured_at.isoformat()}:{pos}"
                    yield Document(doc_id, SHOP, None, when, listing.name)


def build_corpus(
    forums: Iterable[Forum] = (),
    tweets: Iterable[Tweet] = (),
    snapshots: Iterable[ShopSnapshot] = (),
) -> Corpus:
    """Validate cross-record invariants and freeze a corpus."""
    forum_map: dict[str, Forum] = {}
    for forum in forums:
        if forum.id in forum_map:
            raise CorpusError(f"duplicate forum id {forum.id!r}")
        forum_map[forum.id] = forum

    tweet_list = []
    seen_tweets = set()
    for tw in tweets:
        if tw.id in seen_tweets:
            raise CorpusError(f"duplicate tweet id {tw.id!r}")
        seen_tweets.add(tw.id)
        if not tw.matched_keywords:
            raise CorpusError(f"tweet {tw.id!r} has empty matched_keywords; stream is keyword-filtered")
        tweet_list.append(Tweet(tw.id, to_utc(tw.created_at), tw.author_handle, tw.text, frozenset(tw.matched_keywords)))
    tweet_list.sort(key=lambda t: (t.created_at, t.id))

    by_shop: dict[int, list[ShopSnapshot]] = {}
    for snap in snapshots:
        for listing in snap.listings:
            if not listing.name.strip():
                raise CorpusError(f"shop {snap.shop_id}: blank listing name in {snap.captured_at}")
            if listing.price is not None and listing.price < 0:
                raise CorpusError(f"shop {snap.shop_id}: negative price {listing.price}")
        by_shop.setdefault(snap.shop_id, []).append(snap)
    shop_map: dict[int, tuple[ShopSnapshot, ...]] = {}
    for shop_id, snaps in sorted(by_shop.items()):
        snaps.sort(key=lambda s: s.captured_at)
        for a, b in zip(snaps, snaps[1:]):
            if b.captured_at <= a.captured_at:
                raise CorpusError(f"shop {shop_id}: snapshots not strictly increasing at {b.captured_at}")
            if a.domain != b.domain:
                raise CorpusError(f"shop {shop_id}: domain changed between snapshots")
        shop_map[shop_id] = tuple(snaps)

    return Corpus(MappingProxyType(forum_map), tuple(tweet_list), MappingProxyType(shop_map))
