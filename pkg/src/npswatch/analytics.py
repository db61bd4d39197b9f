"""Analyses over the corpus and its term index.

Trend-shaped outputs are document-frequency ratios per time bucket;
structural outputs aggregate raw corpus records.  Every function here is
pure, so results are cacheable and tests can compare them by equality
against independent recomputations.
"""

from __future__ import annotations

import datetime as dt
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import (
    DEFAULT_SOURCE_PRIORITY,
    GRANULARITIES,
    MICROBLOG,
    Corpus,
    ShopSnapshot,
    SubstanceEntry,
    TimeBucket,
    bucket_of,
    bucket_range,
)
from .ingest.links import extract_links, normalize_domain
from .textindex import (
    Scope,
    TermIndex,
    load_common_words,
    load_stopwords,
)
from .tokens import tokenize

__all__ = [
    "UNKNOWN",
    "Gazetteer",
    "GeoDistribution",
    "HorizonSet",
    "LinkOverlapReport",
    "NeverSeen",
    "PairOverlap",
    "SubstanceSummaryRow",
    "TreemapNode",
    "TrendPoint",
    "TrendSeries",
    "UnknownForum",
    "activity_histogram",
    "first_seen",
    "geo_distribution",
    "horizon",
    "link_overlap",
    "load_gazetteer",
    "load_lexicon",
    "neologisms",
    "substance_summary",
    "treemap",
    "trend",
]

UNKNOWN = "UNKNOWN"

ACTIVITY_METRICS = ("posts_per_user", "posts_per_thread")


class UnknownForum(KeyError):
    """A forum id absent from the corpus or index."""


class NeverSeen(LookupError):
    """The substance occurs in no source."""


# ---------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class TrendPoint:
    bucket: TimeBucket
    docs_with_term: int
    docs_total: int
    normalized: float


@dataclass(frozen=True)
class TrendSeries:
    """Per-bucket usage of one term inside one scope, zero-filled and
    contiguous over the scope's source span."""

    term: str
    scope: Scope
    granularity: str
    points: tuple[TrendPoint, ...]


@dataclass(frozen=True)
class HorizonSet:
    """One trend series per section at a fixed tree depth, tree order."""

    term: str
    forum_id: str
    depth: int
    granularity: str
    series: tuple[TrendSeries, ...]


@dataclass(frozen=True)
class TreemapNode:
    section_id: str
    name: str
    own_posts: int
    subtree_posts: int
    children: tuple["TreemapNode", ...]


@dataclass(frozen=True)
class GeoDistribution:
    """User count per ISO-3166 alpha-2 code, plus the UNKNOWN bucket."""

    counts: Mapping[str, int]

    def __getitem__(self, code: str) -> int:
        return self.counts.get(code, 0)

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class SubstanceSummaryRow:
    substance: str
    tweet_count: int
    post_counts: Mapping[str, int]
    shop_ids: frozenset[int]
    first_seen_source: Optional[str]
    first_seen_at: Optional[dt.datetime]


@dataclass(frozen=True)
class PairOverlap:
    source_a: str
    source_b: str
    domains_a: int
    domains_b: int
    intersection: frozenset[str]


@dataclass(frozen=True)
class LinkOverlapReport:
    domains: Mapping[str, frozenset[str]]
    pairs: tuple[PairOverlap, ...]


# ---------------------------------------------------------------------------
# trends


def trend(
    index: TermIndex,
    term: str,
    scope: Scope,
    granularity: Optional[str] = None,
) -> TrendSeries:
    """Documents mentioning ``term`` per bucket, normalized by the
    bucket's total document count within the scope.

    Buckets run contiguously over the scope's source span; empty buckets
    report zero.  A section scope covers its whole descendant subtree.
    """
    g = granularity if granularity is not None else index.granularity
    if g not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    sections = index.section_subtree(scope)
    lo, hi = index.span(scope.source)

    term = term.casefold()
    totals: Counter = Counter()
    for _, e in index.entries():
        if e.source != scope.source:
            continue
        if sections is not None and e.section_id not in sections:
            continue
        totals[bucket_of(e.timestamp, g)] += 1
    with_term: Counter = Counter()
    for p in index.postings(term):
        if p.source != scope.source:
            continue
        if sections is not None and p.section_id not in sections:
            continue
        with_term[bucket_of(p.timestamp, g)] += 1

    points = []
    for b in bucket_range(lo, hi, g):
        w, t = with_term.get(b, 0), totals.get(b, 0)
        points.append(TrendPoint(b, w, t, w / max(t, 1)))
    return TrendSeries(term, scope, g, tuple(points))


def _preorder(root: str, nodes: Mapping) -> list[str]:
    out, stack = [], [root]
    while stack:
        sid = stack.pop()
        out.append(sid)
        stack.extend(reversed(nodes[sid].children))
    return out


def horizon(
    index: TermIndex,
    term: str,
    forum_id: str,
    depth: int,
    granularity: Optional[str] = None,
) -> HorizonSet:
    """One trend series per depth-``depth`` section of the forum.

    Series appear in tree (preorder) order and share the forum-wide
    bucket span, so they stack directly into a horizon chart.
    """
    try:
        root, nodes = index.tree(forum_id)
    except KeyError:
        raise UnknownForum(forum_id) from None
    g = granularity if granularity is not None else index.granularity
    max_depth = max(n.depth for n in nodes.values())
    if not 1 <= depth <= max_depth:
        raise ValueError(f"depth must be within 1..{max_depth}")
    sids = [sid for sid in _preorder(root, nodes) if nodes[sid].depth == depth]
    series = tuple(trend(index, term, Scope(forum_id, sid), g) for sid in sids)
    return HorizonSet(term.casefold(), forum_id, depth, g, series)


# ---------------------------------------------------------------------------
# neologisms


def neologisms(
    index: TermIndex,
    source: str,
    cutoff: dt.date,
    min_count: int = 20,
    top_n: Optional[int] = None,
    stopwords: Optional[frozenset[str]] = None,
    background: Optional[frozenset[str]] = None,
) -> list[tuple[str, int, dt.datetime]]:
    """Terms first seen in ``source`` strictly after the cutoff day (UTC).

    A term qualifies iff its first occurrence in the source falls after
    ``cutoff``, it appears in at least ``min_count`` documents of the
    source, and it is in neither the stopword list nor the background
    dictionary (defaults: the shipped lists).  Rows are (term,
    document_count, first_seen_at), heaviest first, ties lexicographic.
    """
    lo, hi = index.span(source)
    if not lo.date() <= cutoff <= hi.date():
        raise ValueError(f"cutoff {cutoff} outside the source span")
    stop = load_stopwords() if stopwords is None else stopwords
    bg = load_common_words() if background is None else background
    excluded = stop | bg

    rows = []
    for term in index.vocabulary():
        if term in excluded:
            continue
        first = index.first_occurrence(term, source)
        if first is None or first.date() <= cutoff:
            continue
        count = sum(1 for p in index.postings(term) if p.source == source)
        if count < min_count:
            continue
        rows.append((term, count, first))
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows if top_n is None else rows[:top_n]


# ---------------------------------------------------------------------------
# substance lexicon


def load_lexicon() -> tuple[SubstanceEntry, ...]:
    """The shipped monitored-substance list (canonical name + aliases)."""
    text = resources.files("npswatch.data").joinpath("substances.txt").read_text("utf-8")
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        canonical, *aliases = line.split("\t")
        entries.append(SubstanceEntry.of(canonical, *aliases))
    return tuple(entries)


def _compile_aliases(entries: Iterable[SubstanceEntry]):
    """Pre-split alias token sequences into single-token sets and
    multi-token tuples so the per-document check is set work."""
    out = []
    for e in entries:
        singles, multis = set(), []
        for seq in e.alias_token_seqs():
            if len(seq) == 1:
                singles.add(seq[0])
            else:
                multis.append(seq)
        out.append((e, frozenset(singles), tuple(multis)))
    return out


def _hit(tokens: Sequence[str], token_set: frozenset, singles: frozenset, multis) -> bool:
    if token_set & singles:
        return True
    for seq in multis:
        k = len(seq)
        for i in range(len(tokens) - k + 1):
            if tuple(tokens[i : i + k]) == seq:
                return True
    return False


def _earliest_hits(
    corpus: Corpus,
    entries: Sequence[SubstanceEntry],
    priority: Sequence[str],
) -> dict[str, tuple[str, dt.datetime]]:
    """Earliest alias occurrence per substance over every document.

    Identical timestamps are broken by the configured source priority,
    then source name.
    """
    rank = {s: i for i, s in enumerate(priority)}
    compiled = _compile_aliases(entries)
    best: dict[str, tuple] = {}
    for doc in corpus.documents():
        toks = tokenize(doc.text)
        if not toks:
            continue
        tokset = frozenset(toks)
        key = None
        for e, singles, multis in compiled:
            if not _hit(toks, tokset, singles, multis):
                continue
            if key is None:
                key = (doc.created_at, rank.get(doc.source, len(rank)), doc.source)
            cur = best.get(e.canonical_name)
            if cur is None or key < cur:
                best[e.canonical_name] = key
    return {name: (src, ts) for name, (ts, _, src) in best.items()}


def first_seen(
    corpus: Corpus,
    entry: SubstanceEntry,
    priority: Sequence[str] = DEFAULT_SOURCE_PRIORITY,
) -> tuple[str, dt.datetime]:
    """(source, timestamp) of the globally earliest alias occurrence."""
    hits = _earliest_hits(corpus, (entry,), priority)
    if entry.canonical_name not in hits:
        raise NeverSeen(entry.canonical_name)
    return hits[entry.canonical_name]


def substance_summary(
    corpus: Corpus,
    lexicon: Sequence[SubstanceEntry],
    shops: Optional[Mapping[int, tuple[ShopSnapshot, ...]]] = None,
    priority: Sequence[str] = DEFAULT_SOURCE_PRIORITY,
) -> list[SubstanceSummaryRow]:
    """One row per lexicon entry, in lexicon order.

    Counts are documents matching any alias: tweets, posts per forum,
    and the ids of shops with at least one matching listing name
    (``shops`` defaults to the corpus's own snapshots).  A substance
    absent everywhere gets zero counts and no first-seen attribution.
    """
    snaps_by_shop = corpus.shops if shops is None else shops
    compiled = _compile_aliases(lexicon)

    tweet_counts: Counter = Counter()
    forum_counts: dict[str, Counter] = {e.canonical_name: Counter() for e in lexicon}
    for doc in corpus.documents():
        toks = tokenize(doc.text)
        if not toks:
            continue
        tokset = frozenset(toks)
        for e, singles, multis in compiled:
            if not _hit(toks, tokset, singles, multis):
                continue
            if doc.source == MICROBLOG:
                tweet_counts[e.canonical_name] += 1
            elif doc.source in corpus.forums:
                forum_counts[e.canonical_name][doc.source] += 1

    shop_ids: dict[str, set[int]] = {e.canonical_name: set() for e in lexicon}
    for shop_id, snaps in snaps_by_shop.items():
        for snap in snaps:
            for listing in snap.listings:
                toks = tokenize(listing.name)
                if not toks:
                    continue
                tokset = frozenset(toks)
                for e, singles, multis in compiled:
                    if _hit(toks, tokset, singles, multis):
                        shop_ids[e.canonical_name].add(shop_id)

    earliest = _earliest_hits(corpus, lexicon, priority)
    rows = []
    for e in lexicon:
        name = e.canonical_name
        src, ts = earliest.get(name, (None, None))
        rows.append(
            SubstanceSummaryRow(
                substance=name,
                tweet_count=tweet_counts.get(name, 0),
                post_counts=MappingProxyType(
                    {fid: forum_counts[name].get(fid, 0) for fid in corpus.forums}
                ),
                shop_ids=frozenset(shop_ids[name]),
                first_seen_source=src,
                first_seen_at=ts,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# structure


def treemap(corpus: Corpus, forum_id: str) -> TreemapNode:
    """Post counts over the section tree; subtree totals are additive.

    Sections with zero posts stay in the tree (structure is data)."""
    forum = corpus.forums.get(forum_id)
    if forum is None:
        raise UnknownForum(forum_id)
    own: Counter = Counter()
    for post in forum.posts:
        own[forum.threads[post.thread_id].section_id] += 1

    def build(sid: str) -> TreemapNode:
        children = tuple(build(c) for c in forum.sections[sid].children)
        o = own.get(sid, 0)
        return TreemapNode(
            sid,
            forum.sections[sid].name,
            o,
            o + sum(c.subtree_posts for c in children),
            children,
        )

    return build(forum.root_id)


def activity_histogram(corpus: Corpus, forum_id: str, metric: str) -> list[int]:
    """Per-user or per-thread post counts, ascending.

    posts_per_user covers users with at least one post; posts_per_thread
    covers threads with at least one post.
    """
    forum = corpus.forums.get(forum_id)
    if forum is None:
        raise UnknownForum(forum_id)
    if metric == "posts_per_user":
        return sorted(u.post_count for u in forum.users.values() if u.post_count > 0)
    if metric == "posts_per_thread":
        per_thread: Counter = Counter(p.thread_id for p in forum.posts)
        return sorted(per_thread.values())
    raise ValueError(f"metric must be one of {ACTIVITY_METRICS}")


# ---------------------------------------------------------------------------
# geography


class Gazetteer:
    """Place-name lookup: longest whole-word match, country over city.

    Names are matched case-insensitively inside free-form location
    strings; among all matches the longest wins, with country entries
    beating city entries of the same length.
    """

    def __init__(self, entries: Iterable[tuple[str, str, str]]):
        # entry = (iso_code, kind, name); kind "country" outranks "city"
        self._by_name: dict[str, tuple[str, int]] = {}
        for code, kind, name in entries:
            key = name.casefold().strip()
            if not key:
                continue
            rank = 0 if kind == "country" else 1
            cur = self._by_name.get(key)
            if cur is None or (rank, code) < (cur[1], cur[0]):
                self._by_name[key] = (code.upper(), rank)
        names = sorted(self._by_name, key=len, reverse=True)
        self._pattern = (
            re.compile(r"\b(?:" + "|".join(map(re.escape, names)) + r")\b")
            if names
            else None
        )

    def resolve(self, location: Optional[str]) -> str:
        if not location or self._pattern is None:
            return UNKNOWN
        best = None
        for m in self._pattern.finditer(location.casefold()):
            name = m.group(0)
            code, rank = self._by_name[name]
            key = (-len(name), rank, code)
            if best is None or key < best[0]:
                best = (key, code)
        return best[1] if best else UNKNOWN


def load_gazetteer() -> Gazetteer:
    """The shipped country/city gazetteer."""
    text = resources.files("npswatch.data").joinpath("gazetteer.tsv").read_text("utf-8")
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code, kind, name = line.split("\t")
        entries.append((code, kind, name))
    return Gazetteer(entries)


def geo_distribution(
    corpus: Corpus,
    forum_id: str,
    gazetteer: Optional[Gazetteer] = None,
) -> GeoDistribution:
    """User count per resolved country; unresolvable users land in
    UNKNOWN, so counts always sum to the number of profiles."""
    forum = corpus.forums.get(forum_id)
    if forum is None:
        raise UnknownForum(forum_id)
    gaz = gazetteer if gazetteer is not None else load_gazetteer()
    counts = Counter(gaz.resolve(u.location_raw) for u in forum.users.values())
    return GeoDistribution(MappingProxyType(dict(sorted(counts.items()))))


# ---------------------------------------------------------------------------
# link overlap


def link_overlap(corpus: Corpus, shop_domains: Iterable[str]) -> LinkOverlapReport:
    """Domain sets linked from forums and tweets versus the configured
    shop domains, with every pairwise intersection."""
    forum_domains = set()
    for forum in corpus.forums.values():
        for post in forum.posts:
            forum_domains.update(d for _, d in extract_links(post.text))
    tweet_domains = set()
    for tw in corpus.tweets:
        tweet_domains.update(d for _, d in extract_links(tw.text))
    groups = {
        "forums": frozenset(forum_domains),
        "shops": frozenset(normalize_domain(d) for d in shop_domains),
        "tweets": frozenset(tweet_domains),
    }
    pairs = tuple(
        PairOverlap(a, b, len(groups[a]), len(groups[b]), frozenset(groups[a] & groups[b]))
        for a, b in combinations(sorted(groups), 2)
    )
    return LinkOverlapReport(domains=MappingProxyType(groups), pairs=pairs)
