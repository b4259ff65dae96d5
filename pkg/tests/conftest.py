import random

import pytest

from nrbrane.config import build, desk_config
from nrbrane.exactfield import Poly, field


def desk_poly(p, n):
    F = field(p)
    return Poly.from_roots(p, [F(i) for i in range(n)])


@pytest.fixture(scope="session")
def desk2():
    return build(desk_config(2))


@pytest.fixture(scope="session")
def desk3():
    return build(desk_config(3))


@pytest.fixture(scope="session", params=[2, 3], ids=["g2", "g3"])
def desk(request, desk2, desk3):
    return desk2 if request.param == 2 else desk3


@pytest.fixture
def rng():
    return random.Random(12345)
