"""Command-line entry point.

    npswatch ingest --adapter forum-bl pages/*.html
    npswatch ingest --adapter twitter stream.jsonl
    npswatch snapshot-shops --pages fixtures/shops --date 2015-06-01
    npswatch index
    npswatch analyze trend --term mephedrone --source forum-df --bucket month
    npswatch serve --port 8080
    npswatch fixture

The store directory comes from --store, else the NPSWATCH_STORE
environment variable, else ./npswatch-store.  `analyze` prints exactly
the JSON the corresponding API endpoint returns.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import os
import signal
import sys
from typing import Optional, Sequence

from . import api, ops
from .config import ConfigError, load_config
from .store import DuplicateSnapshot, Store, StoreError

__all__ = ["main"]

log = logging.getLogger(__name__)

ENV_STORE = "NPSWATCH_STORE"
DEFAULT_STORE = "./npswatch-store"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npswatch",
        description="Forum, shop, and stream surveillance for new psychoactive substances.",
    )
    parser.add_argument(
        "--store",
        help=f"store directory (default: ${ENV_STORE} or {DEFAULT_STORE})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="extract records from page or stream dumps")
    p.add_argument("--adapter", required=True, help="forum-bl, forum-df, or twitter")
    p.add_argument("inputs", nargs="+", help="HTML page dumps or stream JSONL files")

    sub.add_parser("index", help="rebuild the term index artifact")

    p = sub.add_parser("snapshot-shops", help="capture one snapshot per configured shop")
    p.add_argument("--pages", help="directory of <domain>.html page dumps (default: live fetch)")
    p.add_argument("--date", help="capture date YYYY-MM-DD (default: today UTC)")

    p = sub.add_parser("analyze", help="print endpoint-equivalent JSON")
    asub = p.add_subparsers(dest="query", required=True)
    asub.add_parser("sources")
    q = asub.add_parser("treemap")
    q.add_argument("--forum", required=True)
    q = asub.add_parser("trend")
    q.add_argument("--term", required=True)
    q.add_argument("--source", required=True)
    q.add_argument("--section")
    q.add_argument("--bucket")
    q = asub.add_parser("horizon")
    q.add_argument("--term", required=True)
    q.add_argument("--forum", required=True)
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--bucket")
    q = asub.add_parser("cooccur")
    q.add_argument("--term", required=True)
    q.add_argument("--source", required=True)
    q.add_argument("--top", type=int)
    q.add_argument("--offset", type=int, default=0)
    q = asub.add_parser("neologisms")
    q.add_argument("--source", required=True)
    q.add_argument("--after", required=True, help="cutoff date YYYY-MM-DD")
    q.add_argument("--min-count", type=int, default=20)
    q.add_argument("--top", type=int)
    q.add_argument("--offset", type=int, default=0)
    q = asub.add_parser("geo")
    q.add_argument("--forum", required=True)
    q = asub.add_parser("distfit")
    q.add_argument("--forum", required=True)
    q.add_argument("--metric", required=True)
    q = asub.add_parser("substances")
    q.add_argument("--top", type=int)
    q.add_argument("--offset", type=int, default=0)
    asub.add_parser("links")

    p = sub.add_parser("serve", help="run the JSON API server")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")

    p = sub.add_parser("fixture", help="materialize the built-in demo corpus into the store")
    p.add_argument("--seed", type=int, default=71)

    return parser


def _resolve_store(arg: Optional[str]) -> Store:
    return Store(arg or os.environ.get(ENV_STORE) or DEFAULT_STORE)


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _run_analyze(args, store: Store) -> int:
    gen = api.load_generation(store)
    if args.query == "sources":
        payload = api.q_sources(gen)
    elif args.query == "treemap":
        payload = api.q_treemap(gen, args.forum)
    elif args.query == "trend":
        payload = api.q_trend(gen, args.term, args.source, args.section, args.bucket)
    elif args.query == "horizon":
        payload = api.q_horizon(gen, args.term, args.forum, args.depth, args.bucket)
    elif args.query == "cooccur":
        payload = api.q_cooccur(gen, args.term, args.source, args.top, args.offset)
    elif args.query == "neologisms":
        payload = api.q_neologisms(
            gen, args.source, args.after, args.min_count, args.top, args.offset
        )
    elif args.query == "geo":
        payload = api.q_geo(gen, args.forum)
    elif args.query == "distfit":
        payload = api.q_distfit(gen, args.forum, args.metric)
    elif args.query == "substances":
        payload = api.q_substances(gen, args.top, args.offset)
    else:
        payload = api.q_links(gen)
    _emit(payload)
    return 0


def _run_fixture(args, store: Store) -> int:
    from ..fixtures import fixture_corpus

    corpus, facts = fixture_corpus(args.seed)
    at = dt.datetime(2016, 6, 1, tzinfo=dt.timezone.utc)  # fixed so reruns dedupe
    appended, skipped = store.append_records(ops.corpus_records(corpus, at), f"fixture-{args.seed}")
    snaps = written = dupes = 0
    for shop_snaps in corpus.shops.values():
        for snap in shop_snaps:
            snaps += 1
            try:
                store.add_snapshot(snap)
                written += 1
            except DuplicateSnapshot:
                dupes += 1
    report = ops.cli_index(store)
    _emit(
        {
            "seed": facts.seed,
            "records_appended": len(appended),
            "records_skipped": skipped,
            "snapshots_written": written,
            "snapshots_skipped": dupes,
            "docs": report.docs,
            "terms": report.terms,
            "index_path": str(report.path),
        }
    )
    return 0


def _run_serve(args, store: Store) -> int:
    import uvicorn

    app = api.create_app(store)
    holder = app.state.holder

    def _reload(signum, frame):  # pragma: no cover - signal plumbing
        try:
            holder.reload()
            log.info("index generation reloaded")
        except Exception:
            log.exception("reload failed; keeping the current generation")

    if hasattr(signal, "SIGHUP"):  # pragma: no branch
        signal.signal(signal.SIGHUP, _reload)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    store = _resolve_store(args.store)
    try:
        if args.command == "ingest":
            config = load_config(store.config_path)
            report = ops.cli_ingest(args.adapter, args.inputs, store, config)
            _emit(
                {
                    "adapter": report.adapter,
                    "inputs": report.inputs,
                    "written": dict(report.written),
                    "skipped": report.skipped,
                    "errors": list(report.errors),
                }
            )
            return 0
        if args.command == "index":
            report = ops.cli_index(store)
            _emit({"docs": report.docs, "terms": report.terms, "path": str(report.path)})
            return 0
        if args.command == "snapshot-shops":
            config = load_config(store.config_path)
            day = dt.date.fromisoformat(args.date) if args.date else None
            report = ops.snapshot_shops(store, config, pages_dir=args.pages, capture_date=day)
            _emit(
                {
                    "captured_at": report.captured_at.isoformat(),
                    "written": list(report.written),
                    "duplicates": list(report.duplicates),
                    "failures": {str(k): v for k, v in report.failures.items()},
                }
            )
            return 0
        if args.command == "analyze":
            return _run_analyze(args, store)
        if args.command == "fixture":
            return _run_fixture(args, store)
        return _run_serve(args, store)
    except api.ApiError as exc:
        json.dump(exc.body(), sys.stderr, indent=2)
        sys.stderr.write("\n")
        return 1
    except (StoreError, ConfigError, ValueError) as exc:
        print(f"npswatch: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
