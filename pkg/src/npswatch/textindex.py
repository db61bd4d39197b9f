"""Immutable term index over the corpus.

Postings are keyed by (term, source, section, time bucket) so the index
can answer "how often was this term used, where, when" in one lookup
shape.  Document frequency (distinct documents containing a term) is
the primary statistic everywhere; raw occurrence totals ride along per
posting as a secondary one.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from importlib import resources
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional

from .corpus import (
    DEFAULT_GRANULARITY,
    GRANULARITIES,
    Corpus,
    TimeBucket,
    bucket_of,
    to_utc,
)
from .tokens import tokenize

__all__ = [
    "Posting",
    "Scope",
    "TermIndex",
    "UnknownSection",
    "UnknownSource",
    "build_index",
    "term_count",
    "term_occurrences",
    "cooccurrence",
    "tokenize",
    "load_stopwords",
    "load_common_words",
]


class UnknownSource(KeyError):
    """Scope names a source the index has never seen."""


class UnknownSection(KeyError):
    """Scope names a section absent from the source's tree."""


@dataclass(frozen=True)
class Posting:
    doc_id: str
    source: str
    section_id: Optional[str]
    bucket: TimeBucket
    timestamp: dt.datetime
    occurrences: int


@dataclass(frozen=True)
class Scope:
    """A query scope: a source, optionally narrowed to a section subtree."""

    source: str
    section: Optional[str] = None


@dataclass(frozen=True)
class _DocEntry:
    source: str
    section_id: Optional[str]
    bucket: TimeBucket
    timestamp: dt.datetime
    term_counts: Mapping[str, int]


@dataclass(frozen=True)
class _SectionInfo:
    name: str
    parent_id: Optional[str]
    depth: int
    children: tuple[str, ...]


class TermIndex:
    """Single-writer batch product; immutable and lock-free to query.

    Construction replays a deterministic document list; every aggregate
    (postings, per-bucket totals, first occurrences, source spans) is
    derived in that one pass, so serialize/parse round-trips rebuild an
    identical index from the document list alone.
    """

    def __init__(
        self,
        granularity: str,
        docs: Iterable[tuple[str, str, Optional[str], dt.datetime, Mapping[str, int]]],
        trees: Mapping[str, tuple[str, Mapping[str, _SectionInfo]]],
    ):
        if granularity not in GRANULARITIES:
            raise ValueError(f"granularity must be one of {GRANULARITIES}")
        self.granularity = granularity
        self._trees = {fid: (root, dict(nodes)) for fid, (root, nodes) in trees.items()}

        doc_map: dict[str, _DocEntry] = {}
        postings: dict[str, list[Posting]] = {}
        totals: dict[tuple[str, Optional[str], TimeBucket], int] = {}
        first: dict[tuple[str, str], dt.datetime] = {}
        spans: dict[str, tuple[dt.datetime, dt.datetime]] = {}
        self._doc_order: list[str] = []

        for doc_id, source, section_id, ts, term_counts in docs:
            if doc_id in doc_map:
                raise ValueError(f"duplicate doc id {doc_id!r}")
            ts = to_utc(ts)
            bucket = bucket_of(ts, granularity)
            counts = MappingProxyType(dict(term_counts))
            doc_map[doc_id] = _DocEntry(source, section_id, bucket, ts, counts)
            self._doc_order.append(doc_id)
            key = (source, section_id, bucket)
            totals[key] = totals.get(key, 0) + 1
            lo, hi = spans.get(source, (ts, ts))
            spans[source] = (min(lo, ts), max(hi, ts))
            for term in sorted(counts):
                postings.setdefault(term, []).append(
                    Posting(doc_id, source, section_id, bucket, ts, counts[term])
                )
                fkey = (term, source)
                if fkey not in first or ts < first[fkey]:
                    first[fkey] = ts

        self._docs = doc_map
        self._postings = {t: tuple(ps) for t, ps in postings.items()}
        self._totals = totals
        self._first = first
        self._spans = spans

    # -- structure ---------------------------------------------------------

    def sources(self) -> list[str]:
        return sorted(self._spans)

    def vocabulary(self) -> frozenset[str]:
        return frozenset(self._postings)

    def doc_count(self, source: Optional[str] = None) -> int:
        if source is None:
            return len(self._docs)
        return sum(1 for e in self._docs.values() if e.source == source)

    def span(self, source: str) -> tuple[dt.datetime, dt.datetime]:
        if source not in self._spans:
            raise UnknownSource(source)
        return self._spans[source]

    def tree(self, forum_id: str) -> tuple[str, Mapping[str, _SectionInfo]]:
        if forum_id not in self._trees:
            raise UnknownSource(forum_id)
        root, nodes = self._trees[forum_id]
        return root, nodes

    def section_subtree(self, scope: Scope) -> Optional[frozenset[str]]:
        """Section ids covered by ``scope``; None means all documents match.

        A scoped section includes its whole descendant subtree.
        """
        if scope.source not in self._spans and scope.source not in self._trees:
            raise UnknownSource(scope.source)
        if scope.section is None:
            return None
        if scope.source not in self._trees:
            raise UnknownSection(scope.section)
        _, nodes = self._trees[scope.source]
        if scope.section not in nodes:
            raise UnknownSection(scope.section)
        out = set()
        stack = [scope.section]
        while stack:
            sid = stack.pop()
            out.add(sid)
            stack.extend(nodes[sid].children)
        return frozenset(out)

    def postings(self, term: str) -> tuple[Posting, ...]:
        return self._postings.get(term, ())

    def first_occurrence(self, term: str, source: str) -> Optional[dt.datetime]:
        return self._first.get((term, source))

    def doc_entry(self, doc_id: str) -> _DocEntry:
        return self._docs[doc_id]

    def entries(self) -> Iterator[tuple[str, _DocEntry]]:
        """(doc_id, entry) pairs in ingestion order."""
        for doc_id in self._doc_order:
            yield doc_id, self._docs[doc_id]

    def totals_for(self, scope: Scope, bucket: Optional[TimeBucket] = None) -> int:
        """Documents in scope, optionally within one bucket."""
        sections = self.section_subtree(scope)
        n = 0
        for (source, section_id, bkt), count in self._totals.items():
            if source != scope.source:
                continue
            if sections is not None and section_id not in sections:
                continue
            if bucket is not None and bkt != bucket:
                continue
            n += count
        return n

    def matching_postings(
        self, term: str, scope: Scope, bucket: Optional[TimeBucket] = None
    ) -> list[Posting]:
        sections = self.section_subtree(scope)
        out = []
        for p in self._postings.get(term, ()):
            if p.source != scope.source:
                continue
            if sections is not None and p.section_id not in sections:
                continue
            if bucket is not None and p.bucket != bucket:
                continue
            out.append(p)
        return out

    # -- serialization -----------------------------------------------------

    def to_payload(self) -> dict:
        docs = []
        for doc_id in self._doc_order:
            e = self._docs[doc_id]
            docs.append([
                doc_id,
                e.source,
                e.section_id,
                e.timestamp.isoformat(),
                {t: e.term_counts[t] for t in sorted(e.term_counts)},
            ])
        trees = {
            fid: {
                "root": root,
                "nodes": {
                    sid: {
                        "name": info.name,
                        "parent": info.parent_id,
                        "depth": info.depth,
                        "children": list(info.children),
                    }
                    for sid, info in sorted(nodes.items())
                },
            }
            for fid, (root, nodes) in sorted(self._trees.items())
        }
        return {"granularity": self.granularity, "docs": docs, "trees": trees}

    @classmethod
    def from_payload(cls, payload: dict) -> "TermIndex":
        trees = {
            fid: (
                spec["root"],
                {
                    sid: _SectionInfo(
                        node["name"], node["parent"], node["depth"], tuple(node["children"])
                    )
                    for sid, node in spec["nodes"].items()
                },
            )
            for fid, spec in payload["trees"].items()
        }
        docs = (
            (doc_id, source, section_id, dt.datetime.fromisoformat(ts), counts)
            for doc_id, source, section_id, ts, counts in payload["docs"]
        )
        return cls(payload["granularity"], docs, trees)


def build_index(corpus: Corpus, granularity: str = DEFAULT_GRANULARITY) -> TermIndex:
    """Tokenize every corpus document and build the index in one batch."""
    trees = {}
    for forum in corpus.forums.values():
        nodes = {
            sid: _SectionInfo(n.name, n.parent_id, n.depth, n.children)
            for sid, n in forum.sections.items()
        }
        trees[forum.id] = (forum.root_id, nodes)

    def doc_iter():
        for doc in corpus.documents():
            counts: dict[str, int] = {}
            for tok in tokenize(doc.text):
                counts[tok] = counts.get(tok, 0) + 1
            yield doc.doc_id, doc.source, doc.section_id, doc.created_at, counts

    return TermIndex(granularity, doc_iter(), trees)


def term_count(
    index: TermIndex, term: str, scope: Scope, bucket: Optional[TimeBucket] = None
) -> tuple[int, int]:
    """(documents containing ``term``, total documents) within scope/bucket.

    Document frequency: a document counts once however often the term
    repeats inside it.
    """
    docs_total = index.totals_for(scope, bucket)
    docs_with = len(index.matching_postings(term, scope, bucket))
    return docs_with, docs_total


def term_occurrences(index: TermIndex, term: str, scope: Optional[Scope] = None) -> int:
    """Raw occurrence total for the term (secondary statistic)."""
    if scope is None:
        return sum(p.occurrences for p in index.postings(term))
    return sum(p.occurrences for p in index.matching_postings(term, scope))


def cooccurrence(
    index: TermIndex,
    term: str,
    scope: Scope,
    top_n: int = 50,
    stopwords: Optional[frozenset[str]] = None,
) -> list[tuple[str, int]]:
    """Terms sharing documents with ``term`` in scope, weighted by the
    number of shared documents, heaviest first, ties lexicographic."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    stop = stopwords if stopwords is not None else frozenset()
    weights: dict[str, int] = {}
    for p in index.matching_postings(term, scope):
        for other in index.doc_entry(p.doc_id).term_counts:
            if other == term or other in stop:
                continue
            weights[other] = weights.get(other, 0) + 1
    ranked = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n]


def _load_wordlist(name: str) -> frozenset[str]:
    text = resources.files("npswatch.data").joinpath(name).read_text("utf-8")
    return frozenset(
        line.strip().casefold()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


def load_stopwords() -> frozenset[str]:
    """The shipped ~300-entry English function-word list."""
    return _load_wordlist("stopwords.txt")


def load_common_words() -> frozenset[str]:
    """Background dictionary of everyday vocabulary for neologism filtering."""
    return _load_wordlist("common_words.txt")
