import numpy as np
import pytest

from hexact.rings import GF, QQ, ZZ

RINGS = [ZZ, QQ, GF(5)]
RING_IDS = ["Z", "Q", "Z5"]


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def ring_params():
    return pytest.mark.parametrize("R", RINGS, ids=RING_IDS)
