import numpy as np
import pytest

from motionmatch.trajectory import gen_circle, gen_polygon


@pytest.fixture
def circle60():
    return gen_circle(1.0, 60)


@pytest.fixture
def square120():
    return gen_polygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], 120)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
