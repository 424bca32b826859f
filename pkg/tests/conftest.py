import numpy as np
import pytest

from twodist.graphs import Graph


@pytest.fixture
def bow_tie() -> Graph:
    """Two triangles {0,1,3} and {0,2,4} sharing node 0."""
    return Graph.from_edges(5, [(0, 1), (1, 3), (0, 3), (0, 2), (2, 4), (0, 4)])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260825)
