"""Deterministic fixture corpora.

One seeded generator produces the two-forum test corpus with every
planted fact the test suite checks: a term burst confined to one
section, neologism sets on both sides of every qualifying rule, a known
geography mix, cross-source substance seeds, and link seeds.  The facts
travel alongside the corpus so tests never re-derive them from the
generator's internals; everything else about the corpus is meant to be
recomputed by brute force.

Filler text is drawn from the shipped common-word list (minus any token
that occurs in a substance alias), so background posts can never
accidentally match a monitored substance or qualify as a neologism.
"""

from __future__ import annotations

import datetime as dt
import random
from dataclasses import dataclass
from decimal import Decimal
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .analytics import load_gazetteer, load_lexicon
from .corpus import (
    FORUM_BL,
    FORUM_DF,
    Corpus,
    Forum,
    Post,
    SectionNode,
    ShopListing,
    ShopSnapshot,
    SubstanceEntry,
    Thread,
    Tweet,
    UserProfile,
    build_corpus,
    build_forum,
)
from .textindex import load_common_words, load_stopwords
from .tokens import tokenize

__all__ = ["FixtureFacts", "SHOP_TABLE", "capped_thread_corpus", "fixture_corpus"]

UTC = dt.timezone.utc

# the ten monitored shops: (shop_id, registrable domain)
SHOP_TABLE = (
    (1, "chem-shop.co.uk"),
    (2, "researchchemist.co.uk"),
    (3, "researchchemistry.co.uk"),
    (4, "sciencesuppliesdirect.com"),
    (5, "bitcoinhighs.co.uk"),
    (6, "buylegalrc.eu"),
    (7, "legalhighlabs.com"),
    (8, "ukhighs.com"),
    (9, "buyanychem.eu"),
    (10, "iceheadshop.co.uk"),
)


@dataclass(frozen=True)
class FixtureFacts:
    """Planted ground truth for the generated corpus."""

    seed: int
    total_posts: int
    posts_per_forum: Mapping[str, int]
    # term burst
    burst_term: str
    burst_forum: str
    burst_section: str
    burst_peak: dt.date  # month the trend maximum must land in
    burst_window: tuple[dt.date, dt.date]
    # neologisms
    neologism_source: str
    neologism_cutoff: dt.date
    neologism_min_count: int
    qualifying_neologisms: Mapping[str, int]  # term -> planted doc count
    disqualified_neologisms: frozenset[str]
    # geography
    geo_forum: str
    gb_users: int
    profiled_users: Mapping[str, int]
    # substances
    mexedrone_expected: tuple[int, int, int, frozenset[int]]  # tweets, bl, df, shops
    mexedrone_first_source: str
    synthacaine_first: tuple[str, dt.datetime]
    # links
    shop_domains: tuple[str, ...]
    tweet_shop_overlap: frozenset[str]


def _dt(day: dt.date, hour: int = 12, minute: int = 0) -> dt.datetime:
    return dt.datetime(day.year, day.month, day.day, hour, minute, tzinfo=UTC)


class _TextMill:
    """Filler-sentence source that cannot collide with planted terms."""

    def __init__(self, rng: random.Random, banned: frozenset[str]):
        vocab = sorted(
            w
            for w in load_common_words() | load_stopwords()
            if w not in banned and "-" not in w
        )
        if len(vocab) < 200:
            raise AssertionError("filler vocabulary unexpectedly small")
        self._rng = rng
        self._vocab = vocab

    def sentence(self, planted: Optional[str] = None) -> str:
        n = self._rng.randint(8, 16)
        words = [self._rng.choice(self._vocab) for _ in range(n)]
        if planted is not None:
            words.insert(self._rng.randrange(len(words) + 1), planted)
        return " ".join(words)


def _banned_tokens(lexicon: Sequence[SubstanceEntry], extra: Sequence[str]) -> frozenset[str]:
    banned = set()
    for entry in lexicon:
        for seq in entry.alias_token_seqs():
            banned.update(seq)
    for term in extra:
        banned.update(tokenize(term))
    return frozenset(banned)


# month -> planted mentions; the 2010-03 spike is the trend/horizon target
_BURST_SHAPE = {
    (2010, 1): 30,
    (2010, 2): 50,
    (2010, 3): 90,
    (2010, 4): 45,
    (2010, 5): 30,
    (2010, 6): 15,
}

_QUALIFYING = {
    "diclazepam": 25,
    "etizolam": 24,
    "pentedrone": 22,
    "methoxphenidine": 21,
    "butylone": 26,
    "ethylphenidate": 23,
    "naphyrone": 20,
    "mdpv": 28,
    "methylone": 27,
    "flakka": 21,
    "3-mmc": 22,
    "5-mapb": 24,
    "1p-lsd": 20,
    "ab-chminaca": 25,
    "synthacaine": 21,
}

# one occurrence before the cutoff disqualifies however heavy the later use
_PRE_CUTOFF = (
    "mephedrone",
    "bromadol",
    "camfetamine",
    "dimethocaine",
    "ethcathinone",
    "fluoromethcathinone",
    "methoxetamine",
    "nitracaine",
)

# first seen after the cutoff but one document short of min_count
_UNDER_COUNT = (
    "mephtetramine",
    "isopropylphenidate",
    "methiopropamine",
    "thiothinone",
    "azidomorphine",
    "benzofury",
    "prolintane",
)

_UK_LOCATIONS = (
    "London, UK",
    "Manchester",
    "Bristol, England",
    "Leeds",
    "Glasgow, Scotland",
    "Cardiff, Wales",
    "United Kingdom",
    "Liverpool, UK",
)
_OTHER_LOCATIONS = (
    ("New York, USA", "US"),
    ("Texas", "US"),
    ("Sydney", "AU"),
    ("Melbourne, Australia", "AU"),
    ("Berlin, Germany", "DE"),
    ("Amsterdam", "NL"),
    ("Toronto, Canada", "CA"),
    ("Dublin, Ireland", "IE"),
    ("Stockholm", "SE"),
    ("somewhere over the rainbow", "UNKNOWN"),
    ("the moon", "UNKNOWN"),
)


def _make_sections(forum: str) -> list[SectionNode]:
    if forum == FORUM_BL:
        return [
            SectionNode("bl-root", "Bluelight", None, 0),
            SectionNode("bl-dd", "Drug Discussion", "bl-root", 1),
            SectionNode("bl-stims", "Stimulants", "bl-dd", 2),
            SectionNode("bl-psy", "Psychedelics", "bl-dd", 2),
            SectionNode("bl-rc", "Research Chemicals", "bl-root", 1),
            SectionNode("bl-rc-archive", "RC Archive", "bl-rc", 2),
            SectionNode("bl-lounge", "The Lounge", "bl-root", 1),
        ]
    return [
        SectionNode("df-root", "Drugsforum", None, 0),
        SectionNode("df-chems", "Chemicals", "df-root", 1),
        SectionNode("df-bk", "Beta-Ketones", "df-chems", 2),
        SectionNode("df-cann", "Cannabinoids", "df-chems", 2),
        SectionNode("df-community", "Community", "df-root", 1),
        SectionNode("df-intro", "Introductions", "df-community", 2),
    ]


_LEAVES = {
    FORUM_BL: ("bl-stims", "bl-psy", "bl-rc-archive", "bl-lounge"),
    FORUM_DF: ("df-bk", "df-cann", "df-intro"),
}

_SPAN = (dt.date(2004, 1, 10), dt.date(2014, 12, 20))


class _ForumBuilder:
    def __init__(self, forum_id: str, rng: random.Random, mill: _TextMill, threads_per_leaf: int):
        self.forum_id = forum_id
        self.rng = rng
        self.mill = mill
        self.posts: list[Post] = []
        self.threads: list[Thread] = []
        self._by_section: dict[str, list[str]] = {}
        epoch = _dt(dt.date(2004, 1, 2))
        n = 0
        for leaf in _LEAVES[forum_id]:
            ids = []
            for _ in range(threads_per_leaf):
                tid = f"{forum_id}-t{n}"
                self.threads.append(
                    Thread(tid, forum_id, leaf, mill.sentence(), epoch + dt.timedelta(hours=n))
                )
                ids.append(tid)
                n += 1
            self._by_section[leaf] = ids

    def random_day(self) -> dt.date:
        lo, hi = _SPAN
        return lo + dt.timedelta(days=self.rng.randrange((hi - lo).days))

    def add(self, author: str, when: dt.datetime, text: str, section: Optional[str] = None) -> None:
        leaf = section if section is not None else self.rng.choice(_LEAVES[self.forum_id])
        tid = self.rng.choice(self._by_section[leaf])
        pid = f"{self.forum_id}-p{len(self.posts)}"
        self.posts.append(Post(pid, tid, author, when, text))

    def add_planted(self, author: str, when: dt.datetime, term: str, section: Optional[str] = None) -> None:
        self.add(author, when, self.mill.sentence(term), section)


def fixture_corpus(seed: int = 71) -> tuple[Corpus, FixtureFacts]:
    """The standard 10,000-post / 500-user / two-forum test corpus."""
    rng = random.Random(seed)
    lexicon = load_lexicon()
    planted_terms = list(_QUALIFYING) + list(_PRE_CUTOFF) + list(_UNDER_COUNT)
    mill = _TextMill(rng, _banned_tokens(lexicon, planted_terms))

    word_sets = load_common_words() | load_stopwords()
    for term in planted_terms:
        if term in word_sets:
            raise AssertionError(f"planted term {term!r} collides with the word lists")

    bl_users = [f"bl-u{i}" for i in range(400)]
    df_users = [f"df-u{i}" for i in range(100)]
    # zipf-ish author weights so per-user activity has a heavy tail
    bl_w = [1.0 / (i + 1) ** 1.2 for i in range(len(bl_users))]
    df_w = [1.0 / (i + 1) ** 1.2 for i in range(len(df_users))]

    bl = _ForumBuilder(FORUM_BL, rng, mill, threads_per_leaf=10)
    df = _ForumBuilder(FORUM_DF, rng, mill, threads_per_leaf=8)

    def bl_author() -> str:
        return rng.choices(bl_users, bl_w)[0]

    def df_author() -> str:
        return rng.choices(df_users, df_w)[0]

    def spread_days(year_month_count: Mapping[tuple[int, int], int]):
        for (y, m), count in year_month_count.items():
            for _ in range(count):
                day = dt.date(y, m, 1) + dt.timedelta(days=rng.randrange(27))
                yield _dt(day, rng.randrange(24), rng.randrange(60))

    # --- mephedrone: five early mentions, then the 2010 burst, all in
    # the Beta-Ketones section so the horizon partition is exact
    early = [_dt(dt.date(2008, 7, 14)), _dt(dt.date(2008, 11, 2)), _dt(dt.date(2009, 3, 9)),
             _dt(dt.date(2009, 8, 21)), _dt(dt.date(2009, 12, 5))]
    for when in early:
        df.add_planted(df_author(), when, "mephedrone", "df-bk")
    for when in spread_days(_BURST_SHAPE):
        df.add_planted(df_author(), when, "mephedrone", "df-bk")

    # --- qualifying neologisms: first occurrence pinned after the cutoff
    cutoff = dt.date(2010, 1, 1)
    synthacaine_first = _dt(dt.date(2012, 1, 5), 10)
    for j, (term, count) in enumerate(_QUALIFYING.items()):
        if term == "synthacaine":
            first = synthacaine_first
        else:
            first = _dt(dt.date(2010, 2 + j % 10, 3 + j), 9)
        df.add_planted(df_author(), first, term)
        for _ in range(count - 1):
            day = first.date() + dt.timedelta(days=1 + rng.randrange(500))
            df.add_planted(df_author(), _dt(day, rng.randrange(24), rng.randrange(60)), term)

    # --- disqualified: one pre-cutoff occurrence plus heavy later use
    for j, term in enumerate(_PRE_CUTOFF):
        if term != "mephedrone":  # mephedrone's early posts are already in
            df.add_planted(df_author(), _dt(dt.date(2008 + j % 2, 1 + j, 11), 8), term)
        for _ in range(21):
            day = cutoff + dt.timedelta(days=30 + rng.randrange(900))
            df.add_planted(df_author(), _dt(day, rng.randrange(24), rng.randrange(60)), term)

    # --- disqualified: post-cutoff but exactly min_count - 1 documents
    for j, term in enumerate(_UNDER_COUNT):
        first = _dt(dt.date(2011, 1 + j, 9), 10)
        df.add_planted(df_author(), first, term)
        for _ in range(18):
            day = first.date() + dt.timedelta(days=1 + rng.randrange(400))
            df.add_planted(df_author(), _dt(day, rng.randrange(24), rng.randrange(60)), term)

    # --- cross-source substance seeds
    mex_bl_first = _dt(dt.date(2015, 1, 10), 9)
    for i in range(5):
        when = mex_bl_first + dt.timedelta(days=3 * i, hours=i)
        bl.add_planted(bl_author(), when, "mexedrone")
    for i in range(2):
        df.add_planted(df_author(), _dt(dt.date(2015, 2, 4 + 5 * i), 15), "mexedrone")
    bl_synth_first = _dt(dt.date(2012, 2, 1), 12)
    for i in range(3):
        bl.add_planted(bl_author(), bl_synth_first + dt.timedelta(days=7 * i), "synthacaine")

    # --- link seeds: forums carry only news links
    news = ("http://news.bbc.co.uk/health", "http://www.theguardian.com/society",
            "https://en.wikipedia.org/wiki/NPS", "http://www.reuters.com/article/drugs")
    for i, url in enumerate(news):
        bl.add(bl_author(), _dt(dt.date(2013, 3 + i, 8), 11), f"{mill.sentence()} {url}")

    # --- filler up to the exact per-forum budgets
    def fill(builder: _ForumBuilder, author, target: int):
        while len(builder.posts) < target:
            day = builder.random_day()
            builder.add(author(), _dt(day, rng.randrange(24), rng.randrange(60)), mill.sentence())

    fill(bl, bl_author, 6500)
    fill(df, df_author, 3500)

    # --- user profiles; forum-df carries the exact 40/100 GB mix
    gaz = load_gazetteer()
    bl_profiles = []
    for i, uid in enumerate(bl_users):
        loc = _OTHER_LOCATIONS[i % len(_OTHER_LOCATIONS)][0] if i % 5 == 0 else None
        bl_profiles.append(UserProfile(uid, FORUM_BL, f"bl-user-{i}", loc))
    df_profiles = []
    for i, uid in enumerate(df_users):
        if i < 40:
            loc = _UK_LOCATIONS[i % len(_UK_LOCATIONS)]
            if gaz.resolve(loc) != "GB":
                raise AssertionError(f"{loc!r} does not resolve to GB")
        else:
            loc, expect = _OTHER_LOCATIONS[i % len(_OTHER_LOCATIONS)]
            if gaz.resolve(loc) == "GB":
                raise AssertionError(f"{loc!r} unexpectedly resolves to GB")
            if i % 7 == 0:
                loc = None
        df_profiles.append(UserProfile(uid, FORUM_DF, f"df-user-{i}", loc))

    forum_bl = build_forum(FORUM_BL, "Bluelight", _make_sections(FORUM_BL), bl.threads, bl.posts, bl_profiles)
    forum_df = build_forum(FORUM_DF, "Drugsforum", _make_sections(FORUM_DF), df.threads, df.posts, df_profiles)

    # --- tweets: keyword-filtered stream, three mexedrone hits, one of
    # them carrying the shop link that creates the tweets/shops overlap
    tweet_rows = [
        ("2015-03-17", "mephedrone back on the menu apparently"),
        ("2015-04-02", "anyone tried mexedrone yet"),
        ("2015-04-20", "etizolam restock spotted"),
        ("2015-05-11", "mexedrone sale at https://www.iceheadshop.co.uk/sale today"),
        ("2015-06-30", "mdai is so underrated"),
        ("2015-08-14", "warning going around about flakka batches"),
        ("2015-09-22", "mexedrone review thread is wild"),
        ("2015-11-05", "diclazepam taper diary, day one"),
        ("2016-01-18", "pentedrone pressed as something else again"),
    ]
    keywords = frozenset(t.casefold() for t in list(_QUALIFYING) + ["mephedrone", "mexedrone", "mdai"])
    tweets = []
    for i, (day, text) in enumerate(tweet_rows):
        matched = keywords & frozenset(tokenize(text))
        if not matched:
            raise AssertionError(f"tweet {i} matches no keyword")
        tweets.append(Tweet(f"tw{i}", _dt(dt.date.fromisoformat(day), 13), f"@user{i}", text, matched))

    # --- weekly shop snapshots; shop 1 sells exactly seven products
    shop_pool = [
        "Mephedrone (4-MMC) 1g", "MDAI powder 500mg", "Etizolam 1mg blisters",
        "3-MMC crystal 1g", "1P-LSD 100mcg blotters", "Butylone pellets",
        "Methoxphenidine 1g", "Pentedrone crystal", "Ethylphenidate 5g",
        "Herbal incense blend", "Kratom powder 50g", "CBD oil 10ml",
    ]
    shop1 = ["Mexedrone 1g", "Mephedrone (4-MMC) 1g", "MDAI powder 500mg",
             "Etizolam 1mg blisters", "3-MMC crystal 1g", "1P-LSD 100mcg blotters",
             "Herbal incense blend"]
    snaps = []
    base = dt.date(2015, 6, 1)
    for shop_id, domain in SHOP_TABLE:
        if shop_id == 1:
            names = list(shop1)
        elif shop_id == 10:
            names = ["Mexedrone crystal 500mg"] + rng.sample(shop_pool, 5)
        else:
            names = rng.sample(shop_pool, rng.randint(3, 8))
        for week in range(4):
            listings = tuple(
                ShopListing(
                    name,
                    Decimal(rng.randrange(500, 5000)) / 100,
                    rng.choice(("GBP", "EUR", "USD")),
                    None,
                )
                for name in names
            )
            snaps.append(ShopSnapshot(shop_id, domain, base + dt.timedelta(days=7 * week), listings))

    corpus = build_corpus([forum_bl, forum_df], tweets, snaps)

    facts = FixtureFacts(
        seed=seed,
        total_posts=10_000,
        posts_per_forum=MappingProxyType({FORUM_BL: 6500, FORUM_DF: 3500}),
        burst_term="mephedrone",
        burst_forum=FORUM_DF,
        burst_section="df-bk",
        burst_peak=dt.date(2010, 3, 1),
        burst_window=(dt.date(2010, 1, 1), dt.date(2010, 7, 1)),
        neologism_source=FORUM_DF,
        neologism_cutoff=cutoff,
        neologism_min_count=20,
        qualifying_neologisms=MappingProxyType(dict(_QUALIFYING)),
        disqualified_neologisms=frozenset(_PRE_CUTOFF) | frozenset(_UNDER_COUNT),
        geo_forum=FORUM_DF,
        gb_users=40,
        profiled_users=MappingProxyType({FORUM_BL: 400, FORUM_DF: 100}),
        mexedrone_expected=(3, 5, 2, frozenset({1, 10})),
        mexedrone_first_source=FORUM_BL,
        synthacaine_first=(FORUM_DF, synthacaine_first),
        shop_domains=tuple(domain for _, domain in SHOP_TABLE),
        tweet_shop_overlap=frozenset({"iceheadshop.co.uk"}),
    )
    return corpus, facts


def capped_thread_corpus(seed: int = 72, cap: int = 1000, capped_threads: int = 50) -> Corpus:
    """A single forum whose thread sizes spike at the platform cap.

    ``capped_threads`` threads hold exactly ``cap`` posts; 150 background
    threads get distinct smaller sizes, so the posts-per-thread mode is
    the cap itself.
    """
    rng = random.Random(seed)
    mill = _TextMill(rng, _banned_tokens(load_lexicon(), []))
    sections = [
        SectionNode("root", "Forum", None, 0),
        SectionNode("main", "Main Discussion", "root", 1),
    ]
    users = [f"u{i}" for i in range(200)]
    weights = [1.0 / (i + 1) ** 1.2 for i in range(len(users))]
    sizes = [cap] * capped_threads + rng.sample(range(1, 500), 150)

    threads, posts = [], []
    day0 = _dt(dt.date(2006, 1, 1))
    for t, size in enumerate(sizes):
        tid = f"t{t}"
        threads.append(Thread(tid, "forum-capped", "main", mill.sentence(), day0))
        for k in range(size):
            when = day0 + dt.timedelta(minutes=7 * len(posts) % 5_000_000, days=t % 300)
            posts.append(Post(f"p{len(posts)}", tid, rng.choices(users, weights)[0], when, mill.sentence()))
    forum = build_forum("forum-capped", "Capped Forum", sections, threads, posts)
    return build_corpus([forum])
