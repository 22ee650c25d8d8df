import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pgreedy import KernelSpec  # noqa: E402

KERNELS = ["gaussian", "wendland-k0", "wendland-k1", "wendland-k2"]


@pytest.fixture
def gauss1():
    return KernelSpec.from_id("gaussian", 1.0, 1)


@pytest.fixture
def five_points():
    """{-1, -0.5, 0, 0.5, 1} as a (5, 1) array."""
    return np.linspace(-1.0, 1.0, 5)[:, None]


def random_distinct(rng, n, dim):
    """n random points in the unit ball, rejection-sampled."""
    pts = []
    while len(pts) < n:
        p = rng.uniform(-1, 1, dim)
        if p @ p <= 1:
            pts.append(p)
    return np.array(pts)
