"""Read-only HTTP/JSON API over one immutable index generation.

Each request snapshots the current generation, so queries never observe
a partially built index; a rebuilt store is adopted by swapping the
generation (`GenerationHolder.reload`), which the server wires to
SIGHUP.  The query functions (`q_*`) hold all endpoint logic and return
the exact payload dicts the HTTP layer emits, so the `analyze` CLI can
print byte-identical JSON without going through a socket.
"""

from __future__ import annotations

import datetime as dt
import logging
from dataclasses import dataclass
from typing import Optional

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..analytics import (
    activity_histogram,
    geo_distribution,
    link_overlap,
    load_lexicon,
    neologisms,
    substance_summary,
    treemap,
    trend,
    horizon,
)
from ..corpus import Corpus, SubstanceEntry
from ..heavytail import HeavyTailError, model_ordering
from ..textindex import Scope, TermIndex, cooccurrence, load_stopwords
from . import payloads
from .config import load_config
from .store import Store

__all__ = [
    "ApiError",
    "Generation",
    "GenerationHolder",
    "MAX_PAGE",
    "create_app",
    "load_generation",
]

log = logging.getLogger(__name__)

MAX_PAGE = 1000  # hard cap on items returned by list endpoints


class ApiError(Exception):
    """One failure, one status: everything a handler can raise maps here."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message

    def body(self) -> dict:
        return {"error": {"status": self.status, "code": self.code, "message": self.message}}


@dataclass(frozen=True)
class Generation:
    """Everything one request generation reads; never mutated in place."""

    corpus: Corpus
    index: TermIndex
    lexicon: tuple[SubstanceEntry, ...]
    shop_domains: tuple[str, ...]


def load_generation(store: Store) -> Generation:
    corpus = store.load_corpus()
    index = store.load_index()
    config = load_config(store.config_path)
    domains = store.shop_domains()
    if not domains:
        domains = {s.shop_id: s.domain for s in config.shops}
    return Generation(corpus, index, load_lexicon(), tuple(domains[k] for k in sorted(domains)))


class GenerationHolder:
    """Mutable cell holding the currently served generation.

    Handlers read `current` once per request; `reload` builds the next
    generation fully before the single reference assignment, so swaps
    are atomic from the handlers' perspective and a failed reload keeps
    the old generation serving.
    """

    def __init__(self, store: Store):
        self._store = store
        self._current = load_generation(store)

    @property
    def current(self) -> Generation:
        return self._current

    def reload(self) -> Generation:
        self._current = load_generation(self._store)
        return self._current


# ---------------------------------------------------------------------------
# endpoint logic, HTTP-free


def _page(items: list, offset: int, top: Optional[int]) -> list:
    if offset < 0:
        raise ApiError(400, "validation", "offset must be >= 0")
    if top is not None and top < 1:
        raise ApiError(400, "validation", "top must be >= 1")
    limit = MAX_PAGE if top is None else min(top, MAX_PAGE)
    return items[offset : offset + limit]


def q_sources(gen: Generation) -> dict:
    return payloads.sources_payload(gen.corpus)


def q_treemap(gen: Generation, forum: str) -> dict:
    with _api_errors():
        return payloads.treemap_payload(treemap(gen.corpus, forum))


def q_trend(
    gen: Generation,
    term: str,
    source: str,
    section: Optional[str] = None,
    bucket: Optional[str] = None,
) -> dict:
    with _api_errors():
        series = trend(gen.index, term, Scope(source, section), bucket)
    return payloads.trend_payload(series)


def q_horizon(
    gen: Generation, term: str, forum: str, depth: int, bucket: Optional[str] = None
) -> dict:
    with _api_errors():
        result = horizon(gen.index, term, forum, depth, bucket)
    return payloads.horizon_payload(result)


def q_cooccur(
    gen: Generation,
    term: str,
    source: str,
    top: Optional[int] = None,
    offset: int = 0,
) -> dict:
    scope = Scope(source)
    with _api_errors():
        rows = cooccurrence(
            gen.index, term.casefold(), scope, top_n=MAX_PAGE, stopwords=load_stopwords()
        )
    return payloads.cooccur_payload(term.casefold(), scope, _page(rows, offset, top))


def q_neologisms(
    gen: Generation,
    source: str,
    after: str,
    min_count: int = 20,
    top: Optional[int] = None,
    offset: int = 0,
) -> dict:
    try:
        cutoff = dt.date.fromisoformat(after)
    except ValueError as exc:
        raise ApiError(400, "validation", f"after must be an ISO date: {exc}") from None
    with _api_errors():
        rows = neologisms(gen.index, source, cutoff, min_count=min_count)
    return payloads.neologisms_payload(source, cutoff, min_count, _page(rows, offset, top))


def q_geo(gen: Generation, forum: str) -> dict:
    with _api_errors():
        return payloads.geo_payload(geo_distribution(gen.corpus, forum))


def q_distfit(gen: Generation, forum: str, metric: str) -> dict:
    with _api_errors():
        sample = activity_histogram(gen.corpus, forum, metric)
        ranking = model_ordering(sample)
    out = payloads.ranking_payload(ranking)
    out["forum_id"] = forum
    out["metric"] = metric
    return out


def q_substances(gen: Generation, top: Optional[int] = None, offset: int = 0) -> dict:
    with _api_errors():
        rows = substance_summary(gen.corpus, gen.lexicon)
    payload = payloads.substances_payload(_page(list(rows), offset, top))
    return payload


def q_links(gen: Generation) -> dict:
    with _api_errors():
        return payloads.overlap_payload(link_overlap(gen.corpus, gen.shop_domains))


class _api_errors:
    """Translate module exceptions to ApiError at the query boundary."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None:
            return False
        if isinstance(exc, ApiError):
            return False
        if isinstance(exc, KeyError):  # UnknownForum / UnknownSource / UnknownSection
            name = exc.args[0] if exc.args else "?"
            raise ApiError(404, "unknown-scope", f"unknown forum, source, or section: {name}") from None
        if isinstance(exc, HeavyTailError):
            raise ApiError(400, "unfittable", str(exc)) from None
        if isinstance(exc, ValueError):
            raise ApiError(400, "validation", str(exc)) from None
        return False


# ---------------------------------------------------------------------------
# HTTP surface


def _strict(*allowed: str):
    """Reject query strings carrying parameters outside the contract."""
    allowed_set = frozenset(allowed)

    def check(request: Request) -> None:
        unknown = sorted(set(request.query_params) - allowed_set)
        if unknown:
            raise ApiError(400, "unknown-parameter", f"unknown query parameter(s): {', '.join(unknown)}")

    return Depends(check)


def create_app(store: Store, holder: Optional[GenerationHolder] = None) -> FastAPI:
    """Build the API app over ``store``; the index must already exist."""
    holder = holder or GenerationHolder(store)
    app = FastAPI(title="npswatch", openapi_url=None, docs_url=None, redoc_url=None)
    app.state.holder = holder

    def gen() -> Generation:
        return holder.current

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError):
        return JSONResponse(exc.body(), status_code=exc.status)

    @app.exception_handler(RequestValidationError)
    async def on_validation(request: Request, exc: RequestValidationError):
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err.get('loc', ()))}: {err.get('msg', 'invalid')}"
            for err in exc.errors()
        )
        return JSONResponse(ApiError(400, "validation", detail).body(), status_code=400)

    @app.exception_handler(Exception)
    async def on_internal(request: Request, exc: Exception):
        log.exception("request failed: %s %s", request.method, request.url.path)
        body = ApiError(500, "internal", "internal error").body()
        return JSONResponse(body, status_code=500)

    @app.get("/api/v1/sources", dependencies=[_strict()])
    async def sources():
        return q_sources(gen())

    @app.get("/api/v1/forums/{forum}/treemap", dependencies=[_strict()])
    async def forum_treemap(forum: str):
        return q_treemap(gen(), forum)

    @app.get("/api/v1/trend", dependencies=[_strict("term", "source", "section", "bucket")])
    async def trend_endpoint(
        term: str, source: str, section: Optional[str] = None, bucket: Optional[str] = None
    ):
        return q_trend(gen(), term, source, section, bucket)

    @app.get("/api/v1/horizon", dependencies=[_strict("term", "forum", "depth", "bucket")])
    async def horizon_endpoint(term: str, forum: str, depth: int, bucket: Optional[str] = None):
        return q_horizon(gen(), term, forum, depth, bucket)

    @app.get("/api/v1/cooccur", dependencies=[_strict("term", "source", "top", "offset")])
    async def cooccur_endpoint(term: str, source: str, top: Optional[int] = None, offset: int = 0):
        return q_cooccur(gen(), term, source, top, offset)

    @app.get(
        "/api/v1/neologisms",
        dependencies=[_strict("source", "after", "min_count", "top", "offset")],
    )
    async def neologisms_endpoint(
        source: str, after: str, min_count: int = 20, top: Optional[int] = None, offset: int = 0
    ):
        return q_neologisms(gen(), source, after, min_count, top, offset)

    @app.get("/api/v1/geo", dependencies=[_strict("forum")])
    async def geo_endpoint(forum: str):
        return q_geo(gen(), forum)

    @app.get("/api/v1/distfit", dependencies=[_strict("forum", "metric")])
    async def distfit_endpoint(forum: str, metric: str):
        return q_distfit(gen(), forum, metric)

    @app.get("/api/v1/substances", dependencies=[_strict("top", "offset")])
    async def substances_endpoint(top: Optional[int] = None, offset: int = 0):
        return q_substances(gen(), top, offset)

    @app.get("/api/v1/links/overlap", dependencies=[_strict()])
    async def links_endpoint():
        return q_links(gen())

    return app
