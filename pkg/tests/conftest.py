import datetime as dt

import pytest

from npswatch.fixtures import capped_thread_corpus, fixture_corpus
from npswatch.service import Store, cli_index, corpus_records
from npswatch.textindex import build_index


@pytest.fixture(scope="session")
def fixture_pair():
    return fixture_corpus()


@pytest.fixture(scope="session")
def corpus(fixture_pair):
    return fixture_pair[0]


@pytest.fixture(scope="session")
def facts(fixture_pair):
    return fixture_pair[1]


@pytest.fixture(scope="session")
def index(corpus):
    return build_index(corpus)


@pytest.fixture(scope="session")
def capped_corpus():
    return capped_thread_corpus()


@pytest.fixture(scope="session")
def fixture_store(tmp_path_factory, corpus):
    """The fixture corpus materialized into a real on-disk store."""
    store = Store(tmp_path_factory.mktemp("store"))
    at = dt.datetime(2016, 6, 1, tzinfo=dt.timezone.utc)
    store.append_records(corpus_records(corpus, at), "fixture")
    for snaps in corpus.shops.values():
        for snap in snaps:
            store.add_snapshot(snap)
    cli_index(store)
    return store
