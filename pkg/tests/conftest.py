import numpy as np
import pytest

from clustest import KMeansOptions, Panel


@pytest.fixture
def worked_panel():
    # R unit means (2, 2, 6, 6); P values (1,3), (2,2), (5,7), (6,6)
    y = np.array([[1, 3, 1, 3], [2, 2, 2, 2], [5, 7, 5, 7], [6, 6, 6, 6]], dtype=float)
    return Panel(y)


@pytest.fixture
def two_period_panel():
    # R = first period with means (0, 0, 10, 10); P = second period
    return Panel(np.array([[0, -1], [0, 1], [10, 9], [10, 11]], dtype=float))


@pytest.fixture
def fast_opts():
    return KMeansOptions(restarts=5, seed=7)


@pytest.fixture
def random_panel():
    def make(n=30, t=10, d=1, seed=0):
        rng = np.random.default_rng(seed)
        return Panel(rng.standard_normal((n, t, d)))
    return make
