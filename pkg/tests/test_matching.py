import random
from fractions import Fraction

import networkx as nx
import pytest

from graphtsp.core.errors import NoPerfectMatchingError
from graphtsp.core.generators import from_networkx, gap_tour
from graphtsp.core.graph import Graph
from graphtsp.core.matching import min_weight_perfect_matching, third_bound_check


def perfect_matchings(g: Graph, free=None):
    """All perfect matchings as sorted edge-id tuples"""
    free = set(range(g.vertex_count)) if free is None else free
    if not free:
        yield ()
        return
    v = min(free)
    for w, eid in g.adjacency[v]:
        if w in free:
            for rest in perfect_matchings(g, free - {v, w}):
                yield tuple(sorted((eid,) + rest))


def brute_force(g, w):
    best = min(perfect_matchings(g), key=lambda m: (sum(Fraction(w[e]) for e in m), m))
    return frozenset(best), sum((Fraction(w[e]) for e in best), Fraction(0))


def test_four_cycle(cycle):
    m = min_weight_perfect_matching(cycle(4), [1, 2, 1, 2])
    assert m.edges == frozenset({0, 2})
    assert m.weight == 2


def test_ties_go_to_the_lexicographically_smallest_ids(k4):
    m = min_weight_perfect_matching(k4, [1] * 6)
    assert m.edges == frozenset({0, 5})


@pytest.mark.parametrize(
    "weights",
    [
        [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9],
        [Fraction(1, 2), -1, 0, 2, Fraction(-1, 3), 1, 1, 0, -2, 4, 1, 1, 3, Fraction(5, 7), 0],
        [1] * 15,
    ],
)
def test_matches_enumeration_on_k6(weights):
    g = from_networkx(nx.complete_graph(6))
    m = min_weight_perfect_matching(g, weights)
    assert (m.edges, m.weight) == brute_force(g, weights)


def test_matches_enumeration_on_a_prism():
    g = gap_tour(1)
    weights = [1, -1, 1, 1, -1, 1, 0, 1, -1]
    m = min_weight_perfect_matching(g, weights)
    assert (m.edges, m.weight) == brute_force(g, weights)
    assert third_bound_check(g, weights, m)


@pytest.mark.parametrize("graph, weight", [("k4", 2), ("petersen", 5)])
def test_third_bound_on_unit_weights(graph, weight, request):
    g = request.getfixturevalue(graph)
    w = [1] * g.edge_count
    m = min_weight_perfect_matching(g, w)
    assert m.weight == weight
    assert 3 * m.weight == g.edge_count
    assert third_bound_check(g, w, m)


def test_matches_enumeration_on_petersen(petersen):
    weights = [(3 * e) % 7 - 2 for e in range(petersen.edge_count)]
    m = min_weight_perfect_matching(petersen, weights)
    assert (m.edges, m.weight) == brute_force(petersen, weights)


def random_weighted_graph(rng):
    n = rng.choice([2, 4, 6, 8, 10])
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    # a perfect matching is always present
    edges = {(2 * i, 2 * i + 1) for i in range(n // 2)}
    edges |= {p for p in pairs if rng.random() < 0.4}
    edges = sorted(edges)
    weights = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in edges]
    return Graph(n, tuple(edges)), weights


@pytest.mark.parametrize("seed", range(100))
def test_matches_enumeration_on_random_graphs(seed):
    g, weights = random_weighted_graph(random.Random(seed))
    m = min_weight_perfect_matching(g, weights)
    assert (m.edges, m.weight) == brute_force(g, weights)


def test_no_perfect_matching():
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching(Graph(3, ((0, 1), (1, 2))), [1, 1])
    star = Graph(4, ((0, 1), (0, 2), (0, 3)))
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching(star, [1, 1, 1])


def test_empty_graph_and_weight_count():
    assert min_weight_perfect_matching(Graph(0), []).edges == frozenset()
    with pytest.raises(ValueError):
        min_weight_perfect_matching(Graph(2, ((0, 1),)), [])
