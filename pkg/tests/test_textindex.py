import datetime as dt
import json
import random

import pytest

from npswatch.corpus import (
    Post,
    SectionNode,
    ShopListing,
    ShopSnapshot,
    Thread,
    Tweet,
    bucket_of,
    build_corpus,
    build_forum,
)
from npswatch.textindex import (
    Scope,
    TermIndex,
    UnknownSection,
    UnknownSource,
    build_index,
    cooccurrence,
    load_common_words,
    load_stopwords,
    term_count,
    term_occurrences,
)

from oracles import naive_cooccurrence, words

UTC = dt.timezone.utc


def ts(y, m, d, h=12):
    return dt.datetime(y, m, d, h, tzinfo=UTC)


@pytest.fixture(scope="module")
def hand_corpus():
    sections = [
        SectionNode("root", "Root", None, 0),
        SectionNode("rc", "Research Chems", "root", 1),
        SectionNode("rc-arch", "Archive", "rc", 2),
        SectionNode("lounge", "Lounge", "root", 1),
    ]
    threads = [
        Thread("t1", "f", "rc", "mephedrone thread", ts(2010, 1, 1)),
        Thread("t2", "f", "rc-arch", "old stuff", ts(2009, 1, 1)),
        Thread("t3", "f", "lounge", "chat", ts(2010, 1, 1)),
    ]
    posts = [
        Post("p1", "t1", "u1", ts(2010, 1, 10), "mephedrone mephedrone hits hard"),
        Post("p2", "t1", "u2", ts(2010, 2, 3), "quiet month"),
        Post("p3", "t2", "u1", ts(2010, 1, 20), "archived mephedrone report"),
        Post("p4", "t3", "u3", ts(2010, 3, 5), "lounge chatter about mephedrone"),
    ]
    forum = build_forum("f", "Forum", sections, threads, posts)
    tweets = [
        Tweet("tw1", ts(2010, 1, 15), "@a", "mephedrone on the rise", frozenset({"mephedrone"})),
        Tweet("tw2", ts(2010, 2, 20), "@b", "mdai instead", frozenset({"mdai"})),
    ]
    snaps = [
        ShopSnapshot(1, "s.example", dt.date(2010, 2, 1), (ShopListing("Mephedrone 1g"),)),
    ]
    return build_corpus([forum], tweets, snaps)


@pytest.fixture(scope="module")
def hand_index(hand_corpus):
    return build_index(hand_corpus, "month")


def test_sources_and_doc_counts(hand_index):
    assert hand_index.sources() == ["f", "microblog", "shop"]
    assert hand_index.doc_count() == 7
    assert hand_index.doc_count("f") == 4
    assert hand_index.doc_count("microblog") == 2
    assert hand_index.doc_count("shop") == 1


def test_postings_are_document_frequency(hand_index):
    posting = [p for p in hand_index.postings("mephedrone") if p.doc_id == "f:p1"]
    assert len(posting) == 1  # one posting per document
    assert posting[0].occurrences == 2  # raw repeats kept as a field


def test_term_count_scopes_by_section_subtree(hand_corpus, hand_index):
    whole = term_count(hand_index, "mephedrone", Scope("f"))
    assert whole == (3, 4)
    rc = term_count(hand_index, "mephedrone", Scope("f", "rc"))
    assert rc == (2, 3)  # t1 and the archived t2 under rc's subtree
    arch = term_count(hand_index, "mephedrone", Scope("f", "rc-arch"))
    assert arch == (1, 1)


def test_term_count_with_bucket(hand_index):
    jan = bucket_of(ts(2010, 1, 1), "month")
    assert term_count(hand_index, "mephedrone", Scope("f"), jan) == (2, 2)


def test_index_stores_casefolded_tokens(hand_index):
    # query normalization happens at the caller; the index itself only
    # knows folded tokens
    assert term_count(hand_index, "MEPHEDRONE", Scope("f"))[0] == 0
    assert term_count(hand_index, "MEPHEDRONE".casefold(), Scope("f"))[0] == 3


def test_term_occurrences(hand_index):
    assert term_occurrences(hand_index, "mephedrone", Scope("f")) == 4
    assert term_occurrences(hand_index, "mephedrone") == 6


def test_first_occurrence_per_source(hand_index):
    assert hand_index.first_occurrence("mephedrone", "f") == ts(2010, 1, 10)
    assert hand_index.first_occurrence("mephedrone", "microblog") == ts(2010, 1, 15)
    assert hand_index.first_occurrence("mephedrone", "shop") == ts(2010, 2, 1, 0)
    assert hand_index.first_occurrence("mdai", "f") is None


def test_span_per_source(hand_index):
    assert hand_index.span("f") == (ts(2010, 1, 10), ts(2010, 3, 5))
    with pytest.raises(UnknownSource):
        hand_index.span("nope")


def test_unknown_scope_raises(hand_index):
    with pytest.raises(UnknownSource):
        term_count(hand_index, "x", Scope("nope"))
    with pytest.raises(UnknownSection):
        term_count(hand_index, "x", Scope("f", "nope"))
    with pytest.raises(UnknownSection):
        # tweets have no section tree to scope into
        term_count(hand_index, "x", Scope("microblog", "rc"))


def test_entries_in_ingestion_order(hand_corpus, hand_index):
    ids = [doc_id for doc_id, _ in hand_index.entries()]
    assert ids == [d.doc_id for d in hand_corpus.documents()]


def test_vocabulary_drops_short_and_digit_runs(hand_index):
    vocab = hand_index.vocabulary()
    assert "mephedrone" in vocab and "1g" in vocab
    assert "f" not in vocab and "100" not in vocab


def test_duplicate_doc_ids_rejected():
    docs = [
        ("d1", "s", None, ts(2010, 1, 1), {"a": 1}),
        ("d1", "s", None, ts(2010, 1, 2), {"b": 1}),
    ]
    with pytest.raises(ValueError, match="duplicate doc id"):
        TermIndex("month", docs, {})


def test_cooccurrence_matches_naive(hand_corpus, hand_index):
    got = cooccurrence(hand_index, "mephedrone", Scope("f"), top_n=50)
    want = naive_cooccurrence(hand_corpus, "mephedrone", "f", 50)
    assert got == want


def test_cooccurrence_stopword_filter(hand_index):
    got = cooccurrence(hand_index, "mephedrone", Scope("f"), top_n=50, stopwords=frozenset({"hits"}))
    assert all(t != "hits" for t, _ in got)


def test_payload_round_trip(hand_corpus, hand_index):
    payload = hand_index.to_payload()
    # artifact must be pure JSON
    clone = TermIndex.from_payload(json.loads(json.dumps(payload)))
    assert clone.granularity == hand_index.granularity
    assert clone.vocabulary() == hand_index.vocabulary()
    assert clone.sources() == hand_index.sources()
    assert clone.postings("mephedrone") == hand_index.postings("mephedrone")
    assert clone.span("f") == hand_index.span("f")
    assert clone.tree("f")[0] == hand_index.tree("f")[0]
    assert [d for d, _ in clone.entries()] == [d for d, _ in hand_index.entries()]
    assert term_count(clone, "mephedrone", Scope("f", "rc")) == (2, 3)


def test_payload_serialization_is_deterministic(hand_index):
    a = json.dumps(hand_index.to_payload(), sort_keys=True)
    b = json.dumps(hand_index.to_payload(), sort_keys=True)
    assert a == b


def test_random_corpus_counts_match_brute_force():
    rng = random.Random(9)
    vocab = ["alpha", "beta", "gamma", "delta", "mephedrone", "plant", "food"]
    sections = [SectionNode("root", "R", None, 0)] + [
        SectionNode(f"s{i}", f"S{i}", "root", 1) for i in range(3)
    ]
    threads = [
        Thread(f"t{i}", "f", f"s{i % 3}", "t", ts(2010, 1, 1)) for i in range(6)
    ]
    posts = [
        Post(
            f"p{i}",
            f"t{rng.randrange(6)}",
            f"u{rng.randrange(5)}",
            ts(2010, 1 + rng.randrange(6), 1 + rng.randrange(27), rng.randrange(24)),
            " ".join(rng.choices(vocab, k=rng.randint(1, 8))),
        )
        for i in range(120)
    ]
    forum = build_forum("f", "F", sections, threads, posts)
    corpus = build_corpus([forum])
    index = build_index(corpus, "month")

    section_of = {t.id: t.section_id for t in threads}
    for term in vocab:
        for sid in [None, "s0", "s1", "s2"]:
            got = term_count(index, term, Scope("f", sid))
            keep = [p for p in posts if sid is None or section_of[p.thread_id] == sid]
            want_with = sum(1 for p in keep if term in set(words(p.text)))
            assert got == (want_with, len(keep)), (term, sid)


def test_wordlists_load_and_are_disjoint_enough():
    stop = load_stopwords()
    common = load_common_words()
    assert "the" in stop
    assert len(common) > 300
    assert all(w == w.casefold() for w in stop | common)
