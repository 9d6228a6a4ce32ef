import numpy as np
import pytest

from fermicon import SystemShape, fghz_state, random_state


@pytest.fixture
def fghz():
    return fghz_state()


@pytest.fixture
def shape36():
    return SystemShape(6, 3)


@pytest.fixture
def shape24():
    return SystemShape(4, 2)


def random_probe(dim, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
