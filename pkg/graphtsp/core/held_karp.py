"""
Cutting-plane solver for the Held-Karp relaxation of graph-TSP and its s-t path variant

The relaxation is solved through its dual: rows are edges (capacity 1),
columns are cuts (profit = cut bound). The edge values x are the row prices
of an optimal basis, which makes x a basic solution of the primal.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from graphtsp.config import settings
from graphtsp.core.errors import DisconnectedGraphError, LpError, require
from graphtsp.core.graph import Graph, check_vertex
from graphtsp.core.simplex import RationalSimplex


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CutViolation:
    side: frozenset[int]
    value: Fraction
    bound: int

    @property
    def slack(self) -> Fraction:
        return self.bound - self.value


@dataclass(frozen=True)
class LpSolution:
    x: tuple[Fraction, ...]
    value: Fraction
    is_vertex: bool
    mode: str
    endpoints: tuple[int, int] | None
    active_cuts: tuple[tuple[frozenset[int], int], ...]
    rounds: int

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(e for e, xe in enumerate(self.x) if xe > 0)


def canonical_side(side: frozenset[int], vertex_count: int) -> frozenset[int]:
    """The shore of the cut that does not contain vertex 0"""
    if 0 in side:
        return frozenset(range(vertex_count)) - side
    return frozenset(side)


def cut_bound(side: frozenset[int], s: int | None = None, t: int | None = None) -> int:
    if s is None or t is None or s == t:
        return 2
    return 2 if (s in side) == (t in side) else 1


def crossing_edges(g: Graph, side: frozenset[int]) -> tuple[int, ...]:
    return tuple(e for e, (u, v) in enumerate(g.edges) if (u in side) != (v in side))


def cut_value(g: Graph, x: Sequence[Fraction], side: frozenset[int]) -> Fraction:
    return sum((Fraction(x[e]) for e in crossing_edges(g, side)), Fraction(0))


def _scaled(x: Sequence[Fraction]) -> tuple[int, list[int]]:
    values = [Fraction(v) for v in x]
    if any(v < 0 for v in values):
        raise ValueError("edge values must be nonnegative")
    scale = math.lcm(*(v.denominator for v in values)) if values else 1
    return scale, [int(v * scale) for v in values]


def _global_min_cut(graph: nx.Graph, anchor: int) -> tuple[int, frozenset[int]]:
    """Integer global min cut; the returned shore avoids `anchor`"""
    if not nx.is_connected(graph):
        components = sorted(nx.connected_components(graph), key=min)
        side = next(c for c in components if anchor not in c)
        return 0, frozenset(side)
    value, (left, right) = nx.stoer_wagner(graph, weight="weight")
    side = right if anchor in left else left
    return value, frozenset(side)


def separate_tour(g: Graph, x: Sequence[Fraction]) -> CutViolation | None:
    """Most violated cut x(delta(S)) < 2, or None"""
    n = g.vertex_count
    if n < 2:
        return None
    scale, weights = _scaled(x)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for eid, (u, v) in enumerate(g.edges):
        if weights[eid] > 0:
            graph.add_edge(u, v, weight=weights[eid])

    value, side = _global_min_cut(graph, 0)
    if value >= 2 * scale:
        return None
    return CutViolation(side, Fraction(value, scale), 2)


def separate_path(g: Graph, s: int, t: int, x: Sequence[Fraction]) -> CutViolation | None:
    """
    Most violated cut of the s-t path relaxation, or None

    Cuts with s and t on the same shore need 2 and are found as global cuts
    of the graph with t merged into s; the others need 1 and are s-t min cuts.
    """
    if s == t:
        return separate_tour(g, x)
    n = g.vertex_count
    check_vertex(n, s, "s")
    check_vertex(n, t, "t")
    scale, weights = _scaled(x)

    same_side = None
    if n > 2:
        merged = nx.Graph()
        merged.add_nodes_from(v for v in range(n) if v != t)
        for eid, (u, v) in enumerate(g.edges):
            w = weights[eid]
            a, b = (s if u == t else u), (s if v == t else v)
            if w <= 0 or a == b:
                continue
            if merged.has_edge(a, b):
                merged[a][b]["weight"] += w
            else:
                merged.add_edge(a, b, weight=w)
        value, side = _global_min_cut(merged, s)
        if value < 2 * scale:
            same_side = CutViolation(canonical_side(side, n), Fraction(value, scale), 2)

    flow = nx.Graph()
    flow.add_nodes_from(range(n))
    for eid, (u, v) in enumerate(g.edges):
        if weights[eid] > 0:
            flow.add_edge(u, v, capacity=weights[eid])
    value, (reachable, _) = nx.minimum_cut(flow, s, t, capacity="capacity")
    separating = None
    if value < scale:
        separating = CutViolation(
            canonical_side(frozenset(reachable), n), Fraction(value, scale), 1
        )

    if same_side is None or (separating is not None and separating.slack > same_side.slack):
        return separating
    return same_side


def solve_held_karp(
    g: Graph,
    s: int | None = None,
    t: int | None = None,
    *,
    max_rounds: int | None = None,
) -> LpSolution:
    """
    Exact optimum of LP(G), or of LP(G, s, t) when distinct endpoints are given

    Starts from all singleton cuts and adds one most violated cut per round.
    """
    n = g.vertex_count
    if n == 0 or not g.is_connected():
        raise DisconnectedGraphError("the relaxation needs a connected graph")
    if (s is None) != (t is None):
        raise ValueError("give both path endpoints or neither")
    if s is not None:
        check_vertex(n, s, "s")
        check_vertex(n, t, "t")
    path = s is not None and s != t
    mode = "path" if path else "tour"
    endpoints = (s, t) if path else None
    max_rounds = settings.LP_MAX_ROUNDS if max_rounds is None else max_rounds

    if n == 1:
        return LpSolution((), Fraction(0), True, mode, endpoints, (), 0)

    lp = RationalSimplex([1] * g.edge_count)
    cuts: dict[frozenset[int], int] = {}

    def add_cut(side: frozenset[int]) -> None:
        bound = cut_bound(side, s, t) if path else 2
        lp.add_column({e: 1 for e in crossing_edges(g, side)}, bound)
        cuts[side] = bound

    for v in range(n):
        side = canonical_side(frozenset({v}), n)
        if side not in cuts:
            add_cut(side)

    rounds = 0
    while True:
        lp.solve()
        x = lp.prices
        violation = separate_path(g, s, t, x) if path else separate_tour(g, x)
        if violation is None:
            break
        if violation.side in cuts:
            raise LpError(f"separated cut {sorted(violation.side)} is already active")
        logger.debug(
            f"round {rounds}: cut {sorted(violation.side)} value {violation.value} < {violation.bound}"
        )
        add_cut(violation.side)
        rounds += 1
        if rounds > max_rounds:
            raise LpError(f"cutting-plane loop exceeded {max_rounds} rounds")

    value = lp.value
    require(sum(x, Fraction(0)) == value, "primal and dual objective values differ")
    require(all(xe >= 0 for xe in x), "negative edge value in LP solution")
    logger.info(f"{mode} LP solved: n={n} m={g.edge_count} value={value} rounds={rounds}")
    return LpSolution(
        x=tuple(x),
        value=value,
        is_vertex=True,
        mode=mode,
        endpoints=endpoints,
        active_cuts=tuple(cuts.items()),
        rounds=rounds,
    )


def support_graph(
    g: Graph, lp: LpSolution, *, check_optimum: bool | None = None
) -> Graph:
    """
    Spanning subgraph of edges with positive LP value

    Edge j of the result is edge lp.support[j] of g.
    """
    ids = lp.support
    sub = g.edge_subgraph(ids)
    if lp.is_vertex and lp.mode == "tour":
        require(
            len(ids) <= 2 * g.vertex_count - 1,
            f"extreme point support has {len(ids)} > 2n-1 edges",
        )
    check_optimum = settings.CHECK_SUPPORT_OPTIMUM if check_optimum is None else check_optimum
    if check_optimum and g.vertex_count > 1:
        s, t = lp.endpoints or (None, None)
        again = solve_held_karp(sub, s, t)
        require(again.value == lp.value, f"support optimum {again.value} differs from {lp.value}")
    return sub
