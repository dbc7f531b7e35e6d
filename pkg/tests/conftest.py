from collections import Counter

import networkx as nx
import pytest

from graphtsp.core.generators import from_networkx
from graphtsp.core.graph import Graph, Multigraph, normalize


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple(normalize(i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


@pytest.fixture
def cycle():
    return cycle_graph


@pytest.fixture
def path():
    return path_graph


@pytest.fixture
def diamond() -> Graph:
    # 4-cycle 0-1-2-3 with chord 0-2
    return Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2)))


@pytest.fixture
def bowtie() -> Graph:
    # triangles 0-1-2 and 0-3-4 sharing vertex 0
    return Graph(5, ((0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)))


@pytest.fixture
def k4() -> Graph:
    return from_networkx(nx.complete_graph(4))


@pytest.fixture
def petersen() -> Graph:
    return from_networkx(nx.petersen_graph())


@pytest.fixture
def check_walk():
    """Assert that walk runs from s to t and uses every edge copy of mg exactly once"""

    def check(walk, mg: Multigraph, s: int, t: int) -> None:
        if mg.edge_count == 0:
            assert walk == () and s == t
            return
        assert walk[0][0] == s
        assert walk[-1][1] == t
        for (_, b), (c, _) in zip(walk, walk[1:]):
            assert b == c
        assert Counter(normalize(u, v) for u, v in walk) == Counter(mg.counts)

    return check
