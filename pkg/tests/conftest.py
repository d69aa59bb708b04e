import numpy as np
import pytest

from signband.geometry import SortedDataset


def random_instance(rng, n, curvature=3.0, noise=0.4):
    """Random convex-truth dataset on sorted uniform abscissae."""
    x = np.sort(rng.uniform(0.0, 1.0, n))
    f = curvature * (x - 0.4) ** 2
    y = f + noise * rng.standard_normal(n)
    return SortedDataset(x, y)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
