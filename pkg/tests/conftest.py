import os
import sys
import warnings

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from toricres.cellcx import build_D, build_E  # noqa: E402
from toricres.corpus import corpus_toric  # noqa: E402
from toricres.errors import ProjectivityAssumed  # noqa: E402
from toricres.rescx import build_F, build_G  # noqa: E402

warnings.filterwarnings("ignore", category=ProjectivityAssumed)

F2_ALPHA = (0, 0, 1, 1)


@pytest.fixture(scope="session")
def toric():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus_toric(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def f2(toric):
    return toric("F2")


@pytest.fixture(scope="session")
def f2_D(f2):
    return build_D(f2, F2_ALPHA)


@pytest.fixture(scope="session")
def f2_E(f2):
    return build_E(f2)


@pytest.fixture(scope="session")
def f2_F(f2_D):
    return build_F(f2_D)


@pytest.fixture(scope="session")
def f2_G(f2_E):
    return build_G(f2_E)


@pytest.fixture(scope="session")
def three(toric):
    return toric("threefold5")
