import datetime as dt
import io
from decimal import Decimal

import pytest

from npswatch.corpus import (
    Post,
    SectionNode,
    ShopListing,
    ShopSnapshot,
    Thread,
    Tweet,
    UserProfile,
)
from npswatch.ingest import (
    FORUM_ADAPTERS,
    SHOP_ADAPTER,
    AdapterMismatch,
    FetchPolicy,
    HostUnreachable,
    MalformedPage,
    ShopDescriptor,
    TweetStream,
    corpus_from_records,
    dedupe_key,
    extract_forum_records,
    extract_links,
    extract_shop_snapshot,
    ingest_stream,
    normalize_domain,
    parse_html,
    parse_iso,
    parse_price,
    parse_timestamp,
    read_archive,
    record_for,
    schedule_fetch,
    write_archive,
)

UTC = dt.timezone.utc
BL = FORUM_ADAPTERS["forum-bl"]
DF = FORUM_ADAPTERS["forum-df"]
CAPTURE = dt.datetime(2015, 6, 1, 12, 0, tzinfo=UTC)


# ---------------------------------------------------------------------------
# html shim


def test_parse_html_tolerates_sloppy_markup():
    doc = parse_html(b"<div class='a b'><p>one</div></b><span>tail")
    div = doc.find("div")
    assert div.classes() == frozenset({"a", "b"})
    assert div.find("p").text() == "one"
    # unclosed tags at EOF and stray closers never raise
    assert doc.find("span").text() == "tail"
    assert doc.find("table") is None
    assert doc.find(cls="a") is div


def test_text_collapses_whitespace():
    doc = parse_html("<div>  spread \n over <b>lines</b>\t</div>")
    assert doc.find("div").text() == "spread over lines"


# ---------------------------------------------------------------------------
# timestamp and price grammars


def test_parse_timestamp_relative_forms():
    assert parse_timestamp("2 hours ago", CAPTURE) == CAPTURE - dt.timedelta(hours=2)
    assert parse_timestamp("3 days ago", CAPTURE) == CAPTURE - dt.timedelta(days=3)
    assert parse_timestamp("1 week ago", CAPTURE) == CAPTURE - dt.timedelta(weeks=1)
    assert parse_timestamp("Today, 09:15", CAPTURE) == dt.datetime(2015, 6, 1, 9, 15, tzinfo=UTC)
    assert parse_timestamp("yesterday", CAPTURE) == dt.datetime(2015, 5, 31, tzinfo=UTC)


def test_parse_timestamp_absolute_forms():
    assert parse_timestamp("01-05-2015, 09:30", CAPTURE, BL.time_formats) == dt.datetime(
        2015, 5, 1, 9, 30, tzinfo=UTC
    )
    assert parse_timestamp("2012-01-05 10:00", CAPTURE, DF.time_formats) == dt.datetime(
        2012, 1, 5, 10, 0, tzinfo=UTC
    )
    # ISO always works, Z suffix included
    assert parse_timestamp("2013-04-01T08:00:00Z", CAPTURE) == dt.datetime(
        2013, 4, 1, 8, 0, tzinfo=UTC
    )
    with pytest.raises(MalformedPage, match="timestamp"):
        parse_timestamp("first of never", CAPTURE, BL.time_formats)


def test_parse_price_grammar():
    assert parse_price("£12.99") == (Decimal("12.99"), "GBP")
    assert parse_price("15.00 EUR") == (Decimal("15.00"), "EUR")
    assert parse_price("$ 3") == (Decimal("3"), "USD")
    assert parse_price("12.5") == (Decimal("12.5"), None)
    assert parse_price("free sample") == (None, None)


# ---------------------------------------------------------------------------
# forum page extraction: bluelight dialect


BL_THREAD_PAGE = """
<html><head><meta name="capture-date" content="2015-06-01T12:00:00Z"></head>
<body><div class="bl-page">
<ul class="crumbs">
  <li><a class="crumb" href="/forums/bl-root/">Bluelight</a></li>
  <li><a class="crumb" href="/forums/bl-dd/">Drug Discussion</a></li>
</ul>
<div class="thread-view" data-thread-id="bl-t9">
  <h1 class="thread-title">Mexedrone experiences</h1>
  <div class="post" data-post="p1">
    <a class="post-author" href="/members/u1/">ChemSage</a>
    <span class="post-date">01-05-2015, 09:30</span>
    <div class="post-body">First mexedrone report.</div>
  </div>
  <div class="post" data-post="p2">
    <a class="post-author" href="/members/u2/">Lurker</a>
    <span class="post-date">2 hours ago</span>
    <div class="post-body">Same batch here.</div>
  </div>
  <div class="post" data-post="p3">
    <span class="post-date">01-05-2015, 10:00</span>
    <div class="post-body">orphan without author</div>
  </div>
</div>
</div></body></html>
"""


def test_bl_thread_page():
    records = extract_forum_records(BL_THREAD_PAGE, BL)
    kinds = [r.record_type for r in records]
    assert kinds == ["section", "section", "thread", "post", "post"]
    root, dd = records[0].payload, records[1].payload
    assert root == SectionNode("bl-root", "Bluelight", None, 0)
    assert dd == SectionNode("bl-dd", "Drug Discussion", "bl-root", 1)
    thread = records[2].payload
    assert thread.id == "bl-t9" and thread.section_id == "bl-dd"
    assert thread.title == "Mexedrone experiences"
    p1, p2 = records[3].payload, records[4].payload
    assert p1 == Post("p1", "bl-t9", "chemsage", dt.datetime(2015, 5, 1, 9, 30, tzinfo=UTC), "First mexedrone report.")
    # relative stamp resolves against the page's own capture date
    assert p2.created_at == dt.datetime(2015, 6, 1, 10, 0, tzinfo=UTC)
    # thread creation is its earliest readable post
    assert thread.created_at == p1.created_at
    assert all(r.forum_id == "forum-bl" for r in records)
    assert all(r.ingested_at == CAPTURE for r in records)


def test_bl_broken_post_is_skipped_and_logged(caplog):
    with caplog.at_level("WARNING"):
        records = extract_forum_records(BL_THREAD_PAGE, BL)
    assert sum(1 for r in records if r.record_type == "post") == 2
    assert any("skipped" in m for m in caplog.messages)


def test_bl_section_index_page():
    page = """
    <div class="bl-page">
    <ul class="crumbs"><li><a class="crumb" href="/forums/bl-root/">Bluelight</a></li></ul>
    <li class="forum-node"><a class="forum-link" href="/forums/bl-dd/">Drug Discussion</a></li>
    <li class="forum-node"><a class="forum-link" href="/forums/bl-rc/">Research Chems</a></li>
    </div>
    """
    records = extract_forum_records(page, BL, capture_time=CAPTURE)
    payloads = [r.payload for r in records]
    assert payloads == [
        SectionNode("bl-root", "Bluelight", None, 0),
        SectionNode("bl-dd", "Drug Discussion", "bl-root", 1),
        SectionNode("bl-rc", "Research Chems", "bl-root", 1),
    ]


def test_bl_member_page():
    page = """
    <div class="bl-page">
    <div class="profile-card" data-member="u42">
      <h2 class="profile-name">VoyagerUK</h2>
      <dl><dd class="profile-location">Manchester, UK</dd></dl>
    </div>
    </div>
    """
    records = extract_forum_records(page, BL, capture_time=CAPTURE)
    assert [r.payload for r in records] == [
        UserProfile("u42", "forum-bl", "VoyagerUK", "Manchester, UK")
    ]


def test_thread_id_from_title_link_when_attr_missing():
    page = """
    <div class="bl-page">
    <ul class="crumbs"><li><a class="crumb" href="/forums/bl-root/">Bluelight</a></li></ul>
    <div class="thread-view">
      <h1 class="thread-title"><a href="/threads/bl-t5/">Linked title</a></h1>
      <div class="post" data-post="p1">
        <a class="post-author" href="/members/u1/">A</a>
        <span class="post-date">01-05-2015, 09:30</span>
        <div class="post-body">body</div>
      </div>
    </div>
    </div>
    """
    records = extract_forum_records(page, BL, capture_time=CAPTURE)
    assert records[1].payload.id == "bl-t5"
    assert records[2].payload.thread_id == "bl-t5"


# ---------------------------------------------------------------------------
# forum page extraction: drugsforum dialect


DF_THREAD_PAGE = """
<main class="df-layout">
<nav class="breadcrumb">
  <a href="forumdisplay.php?f=2">Drugs-Forum</a>
  <a href="forumdisplay.php?f=67">Research Chemicals</a>
</nav>
<table class="thread-posts" data-thread-id="811">
  <span class="thread-subject">Synthacaine arrived</span>
  <tr class="post-row" id="post4411">
    <span class="author">Tester</span>
    <td class="postdate">2012-01-05 10:00</td>
    <td class="post-content">Synthacaine in the mail today.</td>
  </tr>
  <tr class="post-row" id="post4412">
    <span class="author">Older Hand</span>
    <td class="postdate">06 Jan 2012, 09:00</td>
    <td class="post-content">Following closely.</td>
  </tr>
</table>
</main>
"""


def test_df_thread_page():
    records = extract_forum_records(DF_THREAD_PAGE, DF, capture_time=CAPTURE)
    assert [r.record_type for r in records] == ["section", "section", "thread", "post", "post"]
    assert records[0].payload == SectionNode("2", "Drugs-Forum", None, 0)
    assert records[1].payload == SectionNode("67", "Research Chemicals", "2", 1)
    thread = records[2].payload
    assert thread.id == "811" and thread.forum_id == "forum-df"
    p1, p2 = records[3].payload, records[4].payload
    assert p1.id == "post4411"
    assert p1.author_id == "tester"
    assert p1.created_at == dt.datetime(2012, 1, 5, 10, 0, tzinfo=UTC)
    # second dialect date format on the same page
    assert p2.created_at == dt.datetime(2012, 1, 6, 9, 0, tzinfo=UTC)


def test_adapter_mismatch_on_foreign_page():
    with pytest.raises(AdapterMismatch):
        extract_forum_records(DF_THREAD_PAGE, BL, capture_time=CAPTURE)
    with pytest.raises(AdapterMismatch):
        extract_forum_records(BL_THREAD_PAGE, DF, capture_time=CAPTURE)


def test_adapter_mismatch_on_bare_page():
    page = """
    <div class="bl-page">
    <ul class="crumbs"><li><a class="crumb" href="/forums/bl-root/">Bluelight</a></li></ul>
    </div>
    """
    with pytest.raises(AdapterMismatch, match="no thread or section"):
        extract_forum_records(page, BL, capture_time=CAPTURE)


def test_capture_date_meta_beats_fallback():
    # the page's own capture stamp anchors relative dates, not the
    # caller's guess
    records = extract_forum_records(
        BL_THREAD_PAGE, BL, capture_time=dt.datetime(2020, 1, 1, tzinfo=UTC)
    )
    p2 = records[4].payload
    assert p2.created_at == dt.datetime(2015, 6, 1, 10, 0, tzinfo=UTC)


def test_missing_capture_date_raises():
    page = DF_THREAD_PAGE  # has no capture-date meta
    with pytest.raises(MalformedPage, match="capture-date"):
        extract_forum_records(page, DF)


def test_shop_adapter_rejected_for_forum_extraction():
    with pytest.raises(ValueError, match="not a forum adapter"):
        extract_forum_records(BL_THREAD_PAGE, SHOP_ADAPTER)


# ---------------------------------------------------------------------------
# shop page extraction


SHOP_PAGE = """
<html><head><meta name="capture-date" content="2015-06-08T00:00:00Z"></head>
<body><div class="showcase">
  <div class="product-card">
    <span class="product-name">Mexedrone crystal 1g</span>
    <span class="product-price">£12.99</span>
  </div>
  <div class="product-card">
    <span class="product-name">Etizolam 10 pills</span>
    <span class="product-price">15.00 EUR</span>
  </div>
  <div class="product-card"><span class="product-price">£9.99</span></div>
  <div class="product-card"><span class="product-name">Mystery sampler</span></div>
</div></body></html>
"""


def test_shop_snapshot_extraction(caplog):
    shop = ShopDescriptor(3, "ukhighs.com")
    with caplog.at_level("WARNING"):
        snap = extract_shop_snapshot(SHOP_PAGE, shop)
    assert snap.shop_id == 3 and snap.domain == "ukhighs.com"
    assert snap.captured_at == dt.date(2015, 6, 8)
    assert snap.listings == (
        ShopListing("Mexedrone crystal 1g", Decimal("12.99"), "GBP", "1g"),
        ShopListing("Etizolam 10 pills", Decimal("15.00"), "EUR", "10 pills"),
        ShopListing("Mystery sampler", None, None, None),
    )
    assert any("nameless" in m for m in caplog.messages)


def test_shop_snapshot_keeps_empty_showcase(caplog):
    page = '<div class="showcase"></div>'
    with caplog.at_level("WARNING"):
        snap = extract_shop_snapshot(page, ShopDescriptor(1, "x.com"), capture_time=CAPTURE)
    assert snap.listings == ()
    assert snap.captured_at == CAPTURE.date()
    assert any("empty showcase" in m for m in caplog.messages)


def test_shop_snapshot_mismatch_and_kind_check():
    with pytest.raises(AdapterMismatch):
        extract_shop_snapshot("<div class='storefront'></div>", ShopDescriptor(1, "x.com"))
    with pytest.raises(ValueError, match="not a shop adapter"):
        extract_shop_snapshot(SHOP_PAGE, ShopDescriptor(1, "x.com"), adapter=BL)


# ---------------------------------------------------------------------------
# links


def test_normalize_domain():
    assert normalize_domain("WWW.Example.COM") == "example.com"
    assert normalize_domain("shop.example.org.") == "shop.example.org"
    assert normalize_domain(" bare.net ") == "bare.net"


def test_extract_links_trims_trailing_punctuation():
    text = "compare (https://a.org/x), https://b.net/y. and https://a.org/x again"
    links = extract_links(text)
    assert links == [
        ("https://a.org/x", "a.org"),
        ("https://b.net/y", "b.net"),
        ("https://a.org/x", "a.org"),  # duplicates kept
    ]


def test_extract_links_skips_malformed():
    assert extract_links("https://]broken and nothing else") == []
    assert extract_links("ftp://old.school/file") == []


# ---------------------------------------------------------------------------
# stream


def make_record(i, text, when="2015-06-01T10:00:00Z"):
    return {"id": i, "created_at": when, "author_handle": f"@u{i}", "text": text}


def test_ingest_stream_filters_and_preserves_order():
    records = [
        make_record(1, "mexedrone is around"),
        make_record(2, "nothing relevant"),
        make_record(3, "4-MMC and mexedrone both"),
    ]
    tweets = list(ingest_stream(records, ["Mexedrone", "4-mmc"]))
    assert [t.id for t in tweets] == ["1", "3"]
    assert tweets[0].matched_keywords == frozenset({"mexedrone"})
    assert tweets[1].matched_keywords == frozenset({"4-mmc", "mexedrone"})
    assert tweets[0].created_at == dt.datetime(2015, 6, 1, 10, 0, tzinfo=UTC)


def test_ingest_stream_requires_keywords():
    with pytest.raises(ValueError, match="keyword"):
        list(ingest_stream([], []))


def test_tweet_stream_drops_oldest_when_full():
    stream = TweetStream(["mexedrone"], buffer_size=3)
    for i in range(5):
        stream.push(make_record(i, f"mexedrone batch {i}"))
    assert (stream.seen, stream.dropped) == (5, 2)
    tweets = stream.drain()
    assert [t.id for t in tweets] == ["2", "3", "4"]  # newest survive, in order
    assert stream.emitted == 3
    assert stream.drain() == []


def test_tweet_stream_counts_only_matching_as_emitted():
    stream = TweetStream(["mexedrone"], buffer_size=10)
    stream.push(make_record(1, "mexedrone"))
    stream.push(make_record(2, "noise"))
    assert len(stream.drain()) == 1
    assert stream.emitted == 1 and stream.seen == 2 and stream.dropped == 0


# ---------------------------------------------------------------------------
# fetch scheduling


def test_planned_schedule_respects_per_host_gap():
    policy = FetchPolicy(min_delay_per_host=2.0, max_concurrent_hosts=4)
    urls = [f"https://h{i % 4}.example/p{i}" for i in range(20)]
    log = schedule_fetch(urls, policy)
    assert len(log.entries) == 20
    assert log.min_same_host_gap() >= 2.0
    # four independent hosts all start immediately
    assert sorted(e.at for e in log.entries)[:4] == [0.0, 0.0, 0.0, 0.0]


def test_host_concurrency_cap_serializes_hosts():
    policy = FetchPolicy(min_delay_per_host=1.0, max_concurrent_hosts=1)
    urls = ["https://a.example/1", "https://a.example/2", "https://b.example/1"]
    log = schedule_fetch(urls, policy)
    by_host = log.by_host()
    a_last = by_host["a.example"][-1].at
    b_first = by_host["b.example"][0].at
    assert b_first >= a_last  # host b waits for a slot, never backdates


def test_retry_backoff_and_recovery():
    failures = {"https://a.example/flaky": 2}

    def fetcher(url):
        if failures.get(url, 0) > 0:
            failures[url] -= 1
            raise OSError("boom")
        return b"ok"

    policy = FetchPolicy(min_delay_per_host=2.0, max_retries=3)
    log = schedule_fetch(["https://a.example/flaky"], policy, fetcher=fetcher)
    assert [e.status for e in log.entries] == ["error", "error", "ok"]
    assert [e.attempt for e in log.entries] == [1, 2, 3]
    gaps = [b.at - a.at for a, b in zip(log.entries, log.entries[1:])]
    assert gaps[0] >= 2.0 and gaps[1] >= 4.0  # exponential backoff
    assert not log.failed


def test_exhausted_retries_recorded_not_raised():
    def fetcher(url):
        if url.endswith("dead"):
            raise OSError("refused")
        return b"ok"

    policy = FetchPolicy(min_delay_per_host=1.0, max_retries=1)
    urls = ["https://a.example/dead", "https://a.example/alive"]
    log = schedule_fetch(urls, policy, fetcher=fetcher)
    assert "https://a.example/dead" in log.failed
    statuses = {e.url: e.status for e in log.entries if e.url.endswith("alive")}
    assert statuses == {"https://a.example/alive": "ok"}  # run continued
    with pytest.raises(HostUnreachable, match="dead"):
        log.raise_for_failures()


def test_fetch_url_and_policy_validation():
    with pytest.raises(ValueError, match="no host"):
        schedule_fetch(["not-a-url"], FetchPolicy())
    with pytest.raises(ValueError):
        FetchPolicy(min_delay_per_host=0)
    with pytest.raises(ValueError):
        FetchPolicy(max_concurrent_hosts=0)
    with pytest.raises(ValueError):
        FetchPolicy(max_retries=-1)


# ---------------------------------------------------------------------------
# archive round trip


def sample_records():
    at = dt.datetime(2015, 6, 1, 12, 0, tzinfo=UTC)
    return [
        record_for(SectionNode("s1", "Root", None, 0), at, "f1"),
        record_for(Thread("t1", "f1", "s1", "Thread", dt.datetime(2015, 5, 1, tzinfo=UTC)), at, "f1"),
        record_for(Post("p1", "t1", "u1", dt.datetime(2015, 5, 1, 9, 0, tzinfo=UTC), "Text with ünicode"), at, "f1"),
        record_for(UserProfile("u1", "f1", "Handle", None), at, "f1"),
        record_for(
            ShopSnapshot(
                2,
                "x.com",
                dt.date(2015, 6, 1),
                (ShopListing("Widget 1g", Decimal("9.99"), "GBP", "1g"),
                 ShopListing("Nameless", None, None, None)),
            ),
            at,
        ),
        record_for(
            Tweet("tw1", dt.datetime(2015, 6, 1, 11, 0, tzinfo=UTC), "@x", "mexedrone", frozenset({"mexedrone"})),
            at,
        ),
    ]


def test_archive_round_trip():
    records = sample_records()
    buf = io.StringIO()
    assert write_archive(records, buf) == len(records)
    buf.seek(0)
    back = list(read_archive(buf))
    assert [r.record_type for r in back] == [r.record_type for r in records]
    for orig, parsed in zip(records, back):
        assert parsed.payload == orig.payload
        assert parsed.ingested_at == orig.ingested_at
        assert parsed.forum_id == orig.forum_id
        assert dedupe_key(parsed) == dedupe_key(orig)


def test_dedupe_key_shapes():
    records = sample_records()
    keys = [dedupe_key(r) for r in records]
    assert keys[0] == ("section", "f1", "s1")
    assert keys[4] == ("listing_snapshot", None, (2, dt.date(2015, 6, 1)))
    assert keys[5] == ("tweet", None, "tw1")
    assert len(set(keys)) == len(keys)


def test_corpus_from_records_first_copy_wins():
    at = dt.datetime(2015, 6, 1, tzinfo=UTC)
    base = [
        record_for(SectionNode("s1", "Root", None, 0), at, "f1"),
        record_for(Thread("t1", "f1", "s1", "T", dt.datetime(2015, 5, 1, tzinfo=UTC)), at, "f1"),
        record_for(Post("p1", "t1", "u1", dt.datetime(2015, 5, 2, tzinfo=UTC), "original"), at, "f1"),
    ]
    edited = record_for(
        Post("p1", "t1", "u1", dt.datetime(2015, 5, 2, tzinfo=UTC), "edited later"), at, "f1"
    )
    corpus = corpus_from_records(base + [edited], {"f1": "Forum One"})
    forum = corpus.forums["f1"]
    assert forum.name == "Forum One"
    assert forum.posts[0].text == "original"
    assert len(forum.posts) == 1


def test_post_forum_inferred_from_thread():
    at = dt.datetime(2015, 6, 1, tzinfo=UTC)
    records = [
        record_for(SectionNode("s1", "Root", None, 0), at, "f1"),
        record_for(Thread("t1", "f1", "s1", "T", dt.datetime(2015, 5, 1, tzinfo=UTC)), at, "f1"),
        # post record arrives without its forum tag
        record_for(Post("p1", "t1", "u1", dt.datetime(2015, 5, 2, tzinfo=UTC), "hi"), at),
    ]
    corpus = corpus_from_records(records)
    assert len(corpus.forums["f1"].posts) == 1

    orphan = [record_for(Post("p2", "t-unknown", "u1", at, "hi"), at)]
    with pytest.raises(ValueError, match="forum id"):
        corpus_from_records(orphan)


def test_parse_iso_variants():
    assert parse_iso("2015-06-01T10:00:00Z") == dt.datetime(2015, 6, 1, 10, 0, tzinfo=UTC)
    assert parse_iso("2015-06-01T12:00:00+02:00") == dt.datetime(2015, 6, 1, 10, 0, tzinfo=UTC)
    with pytest.raises(ValueError):
        parse_iso("junk")
