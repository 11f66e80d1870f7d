import numpy as np
import pytest

from zoomax import make_expanding_circle, make_quadratic


@pytest.fixture(scope="session")
def doubling():
    return make_expanding_circle(2)


@pytest.fixture(scope="session")
def tripling():
    return make_expanding_circle(3)


@pytest.fixture(scope="session")
def chebyshev():
    return make_quadratic(2.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(0xC0FFEE)
