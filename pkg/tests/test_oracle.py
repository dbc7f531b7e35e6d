import itertools

import networkx as nx
import pytest

from graphtsp.config import settings
from graphtsp.core.errors import DisconnectedGraphError, InvalidVertexError, OracleCutoffError
from graphtsp.core.generators import from_networkx, random_2vc
from graphtsp.core.graph import Graph
from graphtsp.core.oracle import distance_matrix, oracle_opt_path, oracle_opt_tour, oracle_walk


def brute_force(g, s=None, t=None):
    """Shortest closed (or s-t) Hamiltonian sequence in the hop metric, by permutations"""
    dist = dict(nx.all_pairs_shortest_path_length(g.to_networkx()))
    n = g.vertex_count
    best = None
    if s is None:
        for rest in itertools.permutations(range(1, n)):
            order = (0,) + rest + (0,)
            length = sum(dist[a][b] for a, b in zip(order, order[1:]))
            best = length if best is None else min(best, length)
    else:
        middle = [v for v in range(n) if v not in (s, t)]
        for rest in itertools.permutations(middle):
            order = (s,) + rest + (t,)
            length = sum(dist[a][b] for a, b in zip(order, order[1:]))
            best = length if best is None else min(best, length)
    return best


def test_distance_matrix(cycle):
    d = distance_matrix(cycle(5))
    assert d.shape == (5, 5)
    assert d[0, 2] == 2 and d[0, 4] == 1 and d[3, 3] == 0


@pytest.mark.parametrize(
    "graph, expected",
    [("diamond", 4), ("bowtie", 6), ("k4", 4), ("petersen", 11)],
)
def test_known_tour_optima(graph, expected, request):
    assert oracle_opt_tour(request.getfixturevalue(graph)) == expected


def test_cycle_and_path(cycle, path):
    assert oracle_opt_tour(cycle(5)) == 5
    assert oracle_opt_tour(path(3)) == 4
    assert oracle_opt_path(path(3), 0, 2) == 2
    assert oracle_opt_path(path(3), 1, 2) == 3
    assert oracle_opt_path(cycle(4), 0, 2) == 4
    assert oracle_opt_path(cycle(4), 0, 1) == 3


def test_trivial_graphs():
    assert oracle_opt_tour(Graph(1)) == 0
    assert oracle_opt_tour(Graph(2, ((0, 1),))) == 2
    assert oracle_opt_path(Graph(2, ((0, 1),)), 0, 1) == 1


@pytest.mark.parametrize("seed", range(5))
def test_matches_permutations(seed):
    g = random_2vc(7, 10, seed)
    assert oracle_opt_tour(g) == brute_force(g)
    assert oracle_opt_path(g, 1, 5) == brute_force(g, 1, 5)


def test_matches_permutations_on_a_tree():
    g = from_networkx(nx.balanced_tree(2, 2))
    assert oracle_opt_tour(g) == brute_force(g) == 12
    assert oracle_opt_path(g, 3, 6) == brute_force(g, 3, 6)


def test_equal_endpoints_give_the_tour(bowtie):
    assert oracle_opt_path(bowtie, 3, 3) == oracle_opt_tour(bowtie)


@pytest.mark.parametrize("s, t", [(0, 0), (1, 3), (2, 4)])
def test_walk_is_optimal_and_eulerian(bowtie, s, t):
    walk = oracle_walk(bowtie, s, t)
    assert walk.edge_count == oracle_opt_path(bowtie, s, t)
    assert set(walk.odd_vertices) == (set() if s == t else {s, t})
    assert walk.is_connected() and walk.is_spanning()


def test_cutoff():
    g = from_networkx(nx.cycle_graph(8))
    with pytest.raises(OracleCutoffError):
        oracle_opt_tour(g, cutoff=7)
    assert oracle_opt_tour(g, cutoff=8) == 8
    with pytest.raises(OracleCutoffError):
        oracle_opt_tour(g, cutoff=settings.ORACLE_HARD_CAP + 1)


def test_bad_input():
    with pytest.raises(DisconnectedGraphError):
        oracle_opt_tour(Graph(4, ((0, 1), (2, 3))))
    with pytest.raises(InvalidVertexError):
        oracle_opt_path(Graph(2, ((0, 1),)), 0, 2)


def smallest_spanning_walk(g, s=None, t=None):
    """Fewest edges of a connected spanning multigraph with the walk's parity, edges used at most twice"""
    n = g.vertex_count
    odd = set() if s is None or s == t else {s, t}
    best = None
    for counts in itertools.product((0, 1, 2), repeat=g.edge_count):
        size = sum(counts)
        if best is not None and size >= best:
            continue
        degree = [0] * n
        parent = list(range(n))

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        for (u, v), c in zip(g.edges, counts):
            if c:
                degree[u] += c
                degree[v] += c
                parent[find(u)] = find(v)
        if {v for v in range(n) if degree[v] % 2} != odd:
            continue
        if len({find(v) for v in range(n)}) == 1:
            best = size
    return best


@pytest.mark.parametrize(
    "n, m, seed, s, t",
    [(4, 5, 0, 0, 2), (5, 6, 1, 1, 3), (5, 7, 2, 0, 4), (6, 7, 3, 2, 5), (6, 8, 4, 0, 1), (7, 8, 5, 3, 6), (7, 9, 6, 1, 4)],
)
def test_matches_multigraph_enumeration(n, m, seed, s, t):
    g = random_2vc(n, m, seed)
    assert oracle_opt_tour(g) == smallest_spanning_walk(g)
    assert oracle_opt_path(g, s, t) == smallest_spanning_walk(g, s, t)


def test_matches_multigraph_enumeration_on_cut_vertices(bowtie):
    tree = from_networkx(nx.balanced_tree(2, 2))
    assert oracle_opt_tour(tree) == smallest_spanning_walk(tree) == 12
    assert oracle_opt_path(tree, 3, 6) == smallest_spanning_walk(tree, 3, 6)
    assert oracle_opt_tour(bowtie) == smallest_spanning_walk(bowtie) == 6
    assert oracle_opt_path(bowtie, 1, 4) == smallest_spanning_walk(bowtie, 1, 4)
