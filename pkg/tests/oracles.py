"""Brute-force reference answers computed straight off the corpus.

Everything here is deliberately naive: plain loops, no index, no shared
code with the package beyond the raw corpus records and the shipped
data files.  Equality against these is the correctness bar for the
analytics stack.
"""

from __future__ import annotations

import datetime as dt
import re
from collections import Counter
from importlib import resources

WORD = re.compile(r"[^\W_]+(?:-[^\W_]+)*")
URL = re.compile(r"https?://\S+", re.IGNORECASE)


def words(text: str) -> list[str]:
    out = []
    for run in WORD.findall(text.casefold()):
        if len(run) >= 2 and not run.replace("-", "").isdigit():
            out.append(run)
    return out


def month_start(day: dt.date) -> dt.date:
    return day.replace(day=1)


def week_start(day: dt.date) -> dt.date:
    return day - dt.timedelta(days=day.weekday())


def bucket_start(ts: dt.datetime, granularity: str) -> dt.date:
    day = ts.astimezone(dt.timezone.utc).date()
    if granularity == "day":
        return day
    if granularity == "week":
        return week_start(day)
    return month_start(day)


def next_start(day: dt.date, granularity: str) -> dt.date:
    if granularity == "day":
        return day + dt.timedelta(days=1)
    if granularity == "week":
        return day + dt.timedelta(days=7)
    if day.month == 12:
        return dt.date(day.year + 1, 1, 1)
    return dt.date(day.year, day.month + 1, 1)


def source_docs(corpus, source):
    """(doc_id, section_id, timestamp, text) rows for one source."""
    rows = []
    if source in corpus.forums:
        forum = corpus.forums[source]
        for post in forum.posts:
            section = forum.threads[post.thread_id].section_id
            rows.append((f"{source}:{post.id}", section, post.created_at, post.text))
    elif source == "microblog":
        for tw in corpus.tweets:
            rows.append((f"microblog:{tw.id}", None, tw.created_at, tw.text))
    elif source == "shop":
        for shop_id, snaps in corpus.shops.items():
            for snap in snaps:
                when = dt.datetime(
                    snap.captured_at.year,
                    snap.captured_at.month,
                    snap.captured_at.day,
                    tzinfo=dt.timezone.utc,
                )
                for pos, listing in enumerate(snap.listings):
                    rows.append(
                        (f"shop:{shop_id}:{snap.captured_at.isoformat()}:{pos}", None, when, listing.name)
                    )
    else:
        raise KeyError(source)
    return rows


def subtree_ids(forum, section_id):
    kids = {}
    for node in forum.sections.values():
        if node.parent_id is not None:
            kids.setdefault(node.parent_id, []).append(node.id)
    out, stack = set(), [section_id]
    while stack:
        sid = stack.pop()
        out.add(sid)
        stack.extend(kids.get(sid, []))
    return out


def naive_trend(corpus, term, source, section, granularity):
    """(bucket start, docs_with_term, docs_total, normalized) rows."""
    term = term.casefold()
    rows = source_docs(corpus, source)
    if section is not None:
        keep = subtree_ids(corpus.forums[source], section)
        scoped = [r for r in rows if r[1] in keep]
    else:
        scoped = rows
    if not rows:
        return []
    span_days = [r[2] for r in rows]
    lo = bucket_start(min(span_days), granularity)
    hi = bucket_start(max(span_days), granularity)

    totals = Counter(bucket_start(ts, granularity) for _, _, ts, _ in scoped)
    with_term = Counter(
        bucket_start(ts, granularity)
        for _, _, ts, text in scoped
        if term in set(words(text))
    )
    out, day = [], lo
    while True:
        w, t = with_term.get(day, 0), totals.get(day, 0)
        out.append((day, w, t, w / max(t, 1)))
        if day == hi:
            return out
        day = next_start(day, granularity)


def naive_horizon(corpus, term, forum_id, depth, granularity):
    forum = corpus.forums[forum_id]
    out, stack = [], [forum.root_id]
    while stack:
        sid = stack.pop()
        out.append(sid)
        stack.extend(reversed(forum.sections[sid].children))
    sids = [sid for sid in out if forum.sections[sid].depth == depth]
    return [(sid, naive_trend(corpus, term, forum_id, sid, granularity)) for sid in sids]


def naive_cooccurrence(corpus, term, source, top_n, stop=frozenset()):
    term = term.casefold()
    weights = Counter()
    for _, _, _, text in source_docs(corpus, source):
        toks = set(words(text))
        if term in toks:
            for other in toks:
                if other != term and other not in stop:
                    weights[other] += 1
    return sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]


def naive_neologisms(corpus, source, cutoff, min_count, excluded):
    first, count = {}, Counter()
    for _, _, ts, text in source_docs(corpus, source):
        for tok in set(words(text)):
            count[tok] += 1
            if tok not in first or ts < first[tok]:
                first[tok] = ts
    rows = [
        (tok, count[tok], first[tok])
        for tok in count
        if tok not in excluded and first[tok].date() > cutoff and count[tok] >= min_count
    ]
    return sorted(rows, key=lambda r: (-r[1], r[0]))


def naive_treemap(corpus, forum_id):
    """section id -> (own posts, subtree posts)."""
    forum = corpus.forums[forum_id]
    own = Counter()
    for post in forum.posts:
        own[forum.threads[post.thread_id].section_id] += 1
    result = {}
    for sid in forum.sections:
        result[sid] = (own.get(sid, 0), sum(own.get(d, 0) for d in subtree_ids(forum, sid)))
    return result


def load_gazetteer_rows():
    text = resources.files("npswatch.data").joinpath("gazetteer.tsv").read_text("utf-8")
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            code, kind, name = line.split("\t")
            rows.append((code.upper(), kind, name.casefold()))
    return rows


def naive_resolve(location, rows):
    if not location:
        return "UNKNOWN"
    folded = location.casefold()
    best = None
    for code, kind, name in rows:
        for m in re.finditer(r"\b" + re.escape(name) + r"\b", folded):
            rank = 0 if kind == "country" else 1
            key = (-len(name), rank, code)
            if best is None or key < best[0]:
                best = (key, code)
    return best[1] if best else "UNKNOWN"


def naive_geo(corpus, forum_id):
    rows = load_gazetteer_rows()
    return Counter(naive_resolve(u.location_raw, rows) for u in corpus.forums[forum_id].users.values())


def alias_hit(text_tokens, alias_seqs):
    for seq in alias_seqs:
        if len(seq) == 1:
            if seq[0] in text_tokens:
                return True
        else:
            for i in range(len(text_tokens) - len(seq) + 1):
                if tuple(text_tokens[i : i + len(seq)]) == seq:
                    return True
    return False


def naive_substance_rows(corpus, lexicon, priority):
    rows = []
    shop_listing_docs = source_docs(corpus, "shop") if corpus.shops else []
    for entry in lexicon:
        seqs = sorted(entry.alias_token_seqs())
        tweet_count = 0
        for tw in corpus.tweets:
            if alias_hit(words(tw.text), seqs):
                tweet_count += 1
        post_counts = {}
        for fid, forum in corpus.forums.items():
            post_counts[fid] = sum(
                1 for p in forum.posts if alias_hit(words(p.text), seqs)
            )
        shop_ids = set()
        for shop_id, snaps in corpus.shops.items():
            for snap in snaps:
                if any(alias_hit(words(l.name), seqs) for l in snap.listings):
                    shop_ids.add(shop_id)
        # earliest mention across every document, priority breaking ties
        hits = []
        rank = {s: i for i, s in enumerate(priority)}
        for fid, forum in corpus.forums.items():
            for p in forum.posts:
                if alias_hit(words(p.text), seqs):
                    hits.append((p.created_at, rank.get(fid, len(rank)), fid))
        for tw in corpus.tweets:
            if alias_hit(words(tw.text), seqs):
                hits.append((tw.created_at, rank.get("microblog", len(rank)), "microblog"))
        for _, _, ts, text in shop_listing_docs:
            if alias_hit(words(text), seqs):
                hits.append((ts, rank.get("shop", len(rank)), "shop"))
        if hits:
            ts, _, src = min(hits)
            first = (src, ts)
        else:
            first = (None, None)
        rows.append((entry.canonical_name, tweet_count, post_counts, shop_ids, first))
    return rows


def naive_domains(texts):
    out = set()
    for text in texts:
        for raw in URL.findall(text):
            raw = raw.rstrip(".,;:!?)]}'\"")
            host = raw.split("://", 1)[1].split("/", 1)[0].split("?", 1)[0].split("#", 1)[0]
            host = host.split("@")[-1].split(":")[0].casefold().rstrip(".")
            if host.startswith("www."):
                host = host[4:]
            if host:
                out.add(host)
    return out


def naive_link_groups(corpus, shop_domains):
    forum_texts = [p.text for f in corpus.forums.values() for p in f.posts]
    tweet_texts = [t.text for t in corpus.tweets]
    shops = set()
    for d in shop_domains:
        d = d.casefold().rstrip(".")
        if d.startswith("www."):
            d = d[4:]
        shops.add(d)
    return {
        "forums": naive_domains(forum_texts),
        "shops": shops,
        "tweets": naive_domains(tweet_texts),
    }


def naive_posts_per_user(corpus, forum_id):
    return sorted(Counter(p.author_id for p in corpus.forums[forum_id].posts).values())


def naive_posts_per_thread(corpus, forum_id):
    return sorted(Counter(p.thread_id for p in corpus.forums[forum_id].posts).values())
