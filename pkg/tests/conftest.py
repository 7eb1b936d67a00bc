import logging
import random

import pytest

from riesz_lab.functions import PLFun
from riesz_lab.regions import Space


@pytest.fixture(autouse=True)
def fresh_logger():
    """Drop handlers bound to a captured stream once a test is done."""
    yield
    logging.getLogger("rieszlab").handlers.clear()


@pytest.fixture
def interval():
    return Space.interval(-1, 1)


@pytest.fixture
def unit():
    return Space.interval(0, 1)


@pytest.fixture
def two_components():
    return Space.of((-1, 0), (1, 2))


@pytest.fixture
def t(interval):
    return PLFun.identity(interval)


@pytest.fixture
def tplus(t):
    return t.pos()


@pytest.fixture
def tminus(t):
    return t.neg()


@pytest.fixture
def abs_t(t):
    return abs(t)


@pytest.fixture
def one(interval):
    return PLFun.one(interval)


@pytest.fixture
def rng():
    return random.Random(0)
