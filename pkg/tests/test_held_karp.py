import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest

from graphtsp.core.errors import DisconnectedGraphError
from graphtsp.core.generators import from_networkx, gap_tour, random_2vc
from graphtsp.core.graph import Graph
from graphtsp.core.held_karp import (
    canonical_side,
    cut_bound,
    cut_value,
    separate_path,
    separate_tour,
    solve_held_karp,
    support_graph,
)
from graphtsp.core.oracle import oracle_opt_path, oracle_opt_tour


def all_sides(n):
    """Every proper cut once, as the shore without vertex 0"""
    for r in range(1, n):
        for side in itertools.combinations(range(1, n), r):
            yield frozenset(side)


def assert_feasible(g, x, s=None, t=None):
    for side in all_sides(g.vertex_count):
        assert cut_value(g, x, side) >= cut_bound(side, s, t), sorted(side)


def violated(g, x, s=None, t=None):
    return [side for side in all_sides(g.vertex_count) if cut_value(g, x, side) < cut_bound(side, s, t)]


def test_cycle_value_is_n(cycle):
    for n in range(3, 9):
        lp = solve_held_karp(cycle(n))
        assert lp.value == n
        assert lp.x == (1,) * n
        assert lp.mode == "tour" and lp.endpoints is None


def test_diamond_optimum_avoids_the_chord(diamond):
    lp = solve_held_karp(diamond)
    assert lp.value == 4
    assert lp.x == (1, 1, 1, 1, 0)
    assert lp.support == (0, 1, 2, 3)


@pytest.mark.parametrize(
    "graph, expected",
    [
        ("bowtie", 6),
        ("k4", 4),
        ("petersen", 10),
    ],
)
def test_known_values(graph, expected, request):
    g = request.getfixturevalue(graph)
    lp = solve_held_karp(g)
    assert lp.value == expected
    assert_feasible(g, lp.x)
    assert sum(lp.x) == lp.value


def test_gap_tour_value_is_feasible_and_below_optimum():
    for k in (1, 2, 3):
        g = gap_tour(k)
        lp = solve_held_karp(g)
        assert_feasible(g, lp.x)
        assert g.vertex_count <= lp.value <= oracle_opt_tour(g)


@pytest.mark.parametrize("seed", range(4))
def test_random_graphs_feasible_and_bounded_by_optimum(seed):
    g = random_2vc(7, 11, seed)
    lp = solve_held_karp(g)
    assert_feasible(g, lp.x)
    assert lp.value <= oracle_opt_tour(g)
    assert all(isinstance(v, Fraction) and v >= 0 for v in lp.x)


def test_path_lp_on_a_path(path):
    lp = solve_held_karp(path(3), 0, 2)
    assert lp.value == 2
    assert lp.mode == "path" and lp.endpoints == (0, 2)


@pytest.mark.parametrize("seed", range(3))
def test_path_lp_feasible(seed):
    g = random_2vc(7, 10, seed)
    lp = solve_held_karp(g, 0, 3)
    assert_feasible(g, lp.x, 0, 3)
    assert lp.value <= oracle_opt_path(g, 0, 3)


def test_path_lp_with_equal_endpoints_is_tour_lp(cycle):
    lp = solve_held_karp(cycle(5), 2, 2)
    assert lp.mode == "tour" and lp.value == 5


def test_separate_tour(cycle):
    half = [Fraction(1, 2)] * 4
    found = separate_tour(cycle(4), half)
    assert found is not None and found.value == 1 and found.bound == 2
    assert 0 not in found.side

    assert separate_tour(cycle(5), [1] * 5) is None

    x = [1] * 6
    x[2] = 0
    found = separate_tour(cycle(6), x)
    assert found.value == 1
    assert found.side in violated(cycle(6), x)


def test_separate_path_prefers_the_larger_slack(path):
    found = separate_path(path(3), 0, 2, [Fraction(1, 2)] * 2)
    assert found.side == frozenset({1})
    assert found.value == 1 and found.bound == 2
    assert separate_path(path(3), 0, 2, [1, 1]) is None


def test_separate_path_finds_endpoint_cuts(cycle):
    x = [Fraction(1, 4)] * 4
    found = separate_path(cycle(4), 0, 2, x)
    assert found is not None
    assert found.side in violated(cycle(4), x, 0, 2)


def test_separation_matches_enumeration_for_cycle_half_values(cycle):
    g = cycle(4)
    x = [Fraction(1, 2)] * 4
    # {1} is an endpoint-side cut of value 1 < 2
    assert frozenset({1}) in violated(g, x, 0, 2)
    assert separate_path(g, 0, 2, x) is not None
    assert not violated(g, [1] * 4, 0, 2)
    assert separate_path(g, 0, 2, [1] * 4) is None


def test_canonical_side():
    assert canonical_side(frozenset({0, 1}), 4) == frozenset({2, 3})
    assert canonical_side(frozenset({2}), 4) == frozenset({2})


def test_support_graph_recertifies(diamond):
    lp = solve_held_karp(diamond)
    sub = support_graph(diamond, lp)
    assert sub.edges == ((0, 1), (1, 2), (2, 3), (0, 3))


def test_disconnected_and_partial_endpoints():
    with pytest.raises(DisconnectedGraphError):
        solve_held_karp(Graph(4, ((0, 1), (2, 3))))
    with pytest.raises(ValueError):
        solve_held_karp(Graph(2, ((0, 1),)), 0, None)
    assert solve_held_karp(Graph(1)).value == 0


def random_fractional_instance(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 10)
    graph = nx.gnp_random_graph(n, 0.5, seed=rng.randrange(2**32))
    graph.add_edges_from((i, i + 1) for i in range(n - 1))
    g = from_networkx(graph)
    values = [0, Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), 1, Fraction(3, 2)]
    x = [rng.choice(values) for _ in range(g.edge_count)]
    s, t = rng.sample(range(n), 2)
    return g, x, s, t


def largest_slack(g, x, s=None, t=None):
    return max(cut_bound(side, s, t) - cut_value(g, x, side) for side in all_sides(g.vertex_count))


@pytest.mark.parametrize("seed", range(50))
def test_separation_matches_cut_enumeration_on_random_graphs(seed):
    g, x, s, t = random_fractional_instance(seed)

    found = separate_tour(g, x)
    if found is None:
        assert not violated(g, x)
    else:
        assert found.side in violated(g, x)
        assert found.value == cut_value(g, x, found.side)
        assert found.slack == largest_slack(g, x)

    found = separate_path(g, s, t, x)
    if found is None:
        assert not violated(g, x, s, t)
    else:
        assert found.side in violated(g, x, s, t)
        assert found.value == cut_value(g, x, found.side)
        assert found.bound == cut_bound(found.side, s, t)
        assert found.slack == largest_slack(g, x, s, t)
