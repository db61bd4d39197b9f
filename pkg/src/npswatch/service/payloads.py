"""JSON-ready views of analytics and fitting results.

Every serializer mirrors its input type field for field; the API
handlers and the ``analyze`` CLI both print exactly these shapes, so
the two surfaces can never drift apart.
"""

from __future__ import annotations

import datetime as dt
from typing import Iterable, Optional

from ..analytics import (
    GeoDistribution,
    HorizonSet,
    LinkOverlapReport,
    SubstanceSummaryRow,
    TreemapNode,
    TrendSeries,
)
from ..corpus import Corpus, TimeBucket
from ..heavytail import Comparison, FitResult, ModelRanking
from ..textindex import Scope

__all__ = [
    "bucket_payload",
    "cooccur_payload",
    "geo_payload",
    "horizon_payload",
    "neologisms_payload",
    "overlap_payload",
    "ranking_payload",
    "scope_payload",
    "sources_payload",
    "substances_payload",
    "treemap_payload",
    "trend_payload",
]


def bucket_payload(bucket: TimeBucket) -> dict:
    return {"granularity": bucket.granularity, "start": bucket.start.isoformat()}


def scope_payload(scope: Scope) -> dict:
    return {"source": scope.source, "section": scope.section}


def trend_payload(series: TrendSeries) -> dict:
    return {
        "term": series.term,
        "scope": scope_payload(series.scope),
        "granularity": series.granularity,
        "points": [
            {
                "bucket": bucket_payload(p.bucket),
                "docs_with_term": p.docs_with_term,
                "docs_total": p.docs_total,
                "normalized": p.normalized,
            }
            for p in series.points
        ],
    }


def horizon_payload(result: HorizonSet) -> dict:
    return {
        "term": result.term,
        "forum_id": result.forum_id,
        "depth": result.depth,
        "granularity": result.granularity,
        "series": [trend_payload(s) for s in result.series],
    }


def treemap_payload(node: TreemapNode) -> dict:
    return {
        "section_id": node.section_id,
        "name": node.name,
        "own_posts": node.own_posts,
        "subtree_posts": node.subtree_posts,
        "children": [treemap_payload(c) for c in node.children],
    }


def geo_payload(dist: GeoDistribution) -> dict:
    return {"counts": dict(dist.counts)}


def cooccur_payload(term: str, scope: Scope, rows: Iterable[tuple[str, int]]) -> dict:
    return {
        "term": term,
        "scope": scope_payload(scope),
        "weights": [{"term": t, "shared_docs": w} for t, w in rows],
    }


def neologisms_payload(
    source: str,
    cutoff: dt.date,
    min_count: int,
    rows: Iterable[tuple[str, int, dt.datetime]],
) -> dict:
    return {
        "source": source,
        "cutoff": cutoff.isoformat(),
        "min_count": min_count,
        "rows": [
            {"term": t, "doc_count": c, "first_seen_at": first.isoformat()}
            for t, c, first in rows
        ],
    }


def substances_payload(rows: Iterable[SubstanceSummaryRow]) -> dict:
    return {
        "rows": [
            {
                "substance": r.substance,
                "tweet_count": r.tweet_count,
                "post_counts": dict(r.post_counts),
                "shop_ids": sorted(r.shop_ids),
                "first_seen_source": r.first_seen_source,
                "first_seen_at": _iso_or_none(r.first_seen_at),
            }
            for r in rows
        ]
    }


def overlap_payload(report: LinkOverlapReport) -> dict:
    return {
        "domains": {group: sorted(domains) for group, domains in report.domains.items()},
        "pairs": [
            {
                "source_a": p.source_a,
                "source_b": p.source_b,
                "domains_a": p.domains_a,
                "domains_b": p.domains_b,
                "intersection": sorted(p.intersection),
            }
            for p in report.pairs
        ],
    }


def _fit_payload(fit: FitResult) -> dict:
    return {
        "model": fit.model,
        "params": dict(fit.params),
        "xmin": fit.xmin,
        "ks_distance": fit.ks_distance,
        "log_likelihood": fit.log_likelihood,
        "n_tail": fit.n_tail,
        "converged": fit.converged,
    }


def _comparison_payload(cmp: Comparison) -> dict:
    return {"model_a": cmp.model_a, "model_b": cmp.model_b, "r": cmp.r, "p": cmp.p}


def ranking_payload(ranking: ModelRanking) -> dict:
    return {
        "ranked": list(ranking.ranked),
        "groups": [list(g) for g in ranking.groups],
        "fits": {name: _fit_payload(f) for name, f in ranking.fits.items()},
        "comparisons": [_comparison_payload(c) for c in ranking.comparisons],
    }


def sources_payload(corpus: Corpus) -> dict:
    forums = [
        {
            "id": forum.id,
            "name": forum.name,
            "root_section": forum.root_id,
            "sections": len(forum.sections),
            "threads": len(forum.threads),
            "posts": len(forum.posts),
            "users": len(forum.users),
        }
        for forum in corpus.forums.values()
    ]
    shops = [
        {
            "shop_id": shop_id,
            "domain": snaps[-1].domain,
            "snapshots": len(snaps),
            "latest_captured_at": snaps[-1].captured_at.isoformat(),
        }
        for shop_id, snaps in sorted(corpus.shops.items())
    ]
    return {"forums": forums, "tweets": len(corpus.tweets), "shops": shops}


def _iso_or_none(ts: Optional[dt.datetime]) -> Optional[str]:
    return None if ts is None else ts.isoformat()
