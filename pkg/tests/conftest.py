import numpy as np
import pytest

GRID_MU = np.linspace(0.0, 1.0, 11)
GRID_P = np.linspace(0.0, 0.5, 11)


@pytest.fixture
def grid():
    mm, pp = np.meshgrid(GRID_MU, GRID_P, indexing="ij")
    return mm.ravel(), pp.ravel()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

from hypothesis import settings  # noqa: E402

settings.register_profile("memqec", deadline=None, max_examples=60)
settings.load_profile("memqec")
