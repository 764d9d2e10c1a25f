import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fracdim import PointCloud, WeightedNetwork


@pytest.fixture
def fig7_left():
    """Four nodes, five edges, two 3-cliques; the weight-3 edge is a detour."""
    return WeightedNetwork(
        4, ((0, 1, 3.0), (0, 3, 1.0), (2, 3, 2.0), (0, 2, 1.0), (1, 2, 1.0))
    )


@pytest.fixture
def fig7_right():
    """Line network with the same shortest-path metric as fig7_left."""
    return WeightedNetwork(4, ((0, 3, 1.0), (0, 2, 1.0), (1, 2, 1.0)))


@pytest.fixture
def random_cloud():
    def make(n, dim=2, seed=0):
        rng = np.random.default_rng(seed)
        return PointCloud(rng.random((n, dim)))

    return make
