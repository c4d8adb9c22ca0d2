import math

import numpy as np
import pytest
from hypothesis import settings

from mfl import make_ball_family, make_corpus, make_domain

# numeric property tests call real operators; no per-example deadline
settings.register_profile("mfl", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("mfl")


@pytest.fixture(scope="session")
def dom1():
    return make_domain(1, 4.0, 256)


@pytest.fixture(scope="session")
def corpus1(dom1):
    return make_corpus(dom1, 7, 8)


@pytest.fixture(scope="session")
def fam1(dom1):
    return make_ball_family(dom1, center_stride=4)


@pytest.fixture(scope="session")
def dom2():
    return make_domain(2, 2.0, 24)


@pytest.fixture(scope="session")
def corpus2(dom2):
    return make_corpus(dom2, 7, 4)


@pytest.fixture(scope="session")
def fam2(dom2):
    return make_ball_family(dom2, center_stride=4)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)


INF = math.inf
