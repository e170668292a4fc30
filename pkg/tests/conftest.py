import math

import pytest

from modelcap.geometry import cusp, euclidean, hyperbolic


@pytest.fixture(scope="session")
def r3():
    return euclidean(3)


@pytest.fixture(scope="session")
def cusp2():
    return cusp()


@pytest.fixture(scope="session")
def h2():
    return hyperbolic(2)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


E = math.e
