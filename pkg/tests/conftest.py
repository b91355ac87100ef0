import os

import pytest

from frobtwist.curvefile import parse

CORPUS_DIR = os.path.join(os.path.dirname(__file__), "..", "corpus")

_CORPUS_FILES = {
    (2, 2): "p2q2.curves",
    (2, 4): "p2q4.curves",
    (3, 3): "p3q3.curves",
}


def load_corpus(p, q):
    path = os.path.join(CORPUS_DIR, _CORPUS_FILES[(p, q)])
    with open(path, "rb") as fh:
        return parse(fh.read())


@pytest.fixture(scope="session")
def corpus22():
    return load_corpus(2, 2)


@pytest.fixture(scope="session")
def corpus24():
    return load_corpus(2, 4)


@pytest.fixture(scope="session")
def corpus33():
    return load_corpus(3, 3)


@pytest.fixture(scope="session")
def corpus_all(corpus22, corpus24, corpus33):
    return {(2, 2): corpus22, (2, 4): corpus24, (3, 3): corpus33}


@pytest.fixture(scope="session")
def surveys_all(corpus_all):
    """Survey every corpus curve once per session."""
    from frobtwist import tate

    out = {}
    for key, cf in corpus_all.items():
        for name, m in cf.curves:
            out[(key, name)] = (m, tate.survey(m))
    return out
