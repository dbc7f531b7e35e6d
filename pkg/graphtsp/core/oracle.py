"""
Exact graph-TSP and graph-TSPP optima by bitmask dynamic programming
over the metric closure
"""
import logging

import networkx as nx
import numpy as np

from graphtsp.config import settings
from graphtsp.core.errors import DisconnectedGraphError, OracleCutoffError
from graphtsp.core.graph import Graph, Multigraph, check_vertex


logger = logging.getLogger(__name__)

INF = 1 << 40


def _check_cutoff(g: Graph, cutoff: int | None) -> None:
    cutoff = settings.ORACLE_CUTOFF if cutoff is None else cutoff
    if cutoff > settings.ORACLE_HARD_CAP:
        raise OracleCutoffError(f"cutoff {cutoff} exceeds the hard cap {settings.ORACLE_HARD_CAP}")
    if g.vertex_count > cutoff:
        raise OracleCutoffError(f"n = {g.vertex_count} exceeds the oracle cutoff {cutoff}")


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs BFS hop distances"""
    n = g.vertex_count
    if n == 0 or not g.is_connected():
        raise DisconnectedGraphError("oracle needs a connected graph")
    dist = np.full((n, n), INF, dtype=np.int64)
    for u, row in nx.all_pairs_shortest_path_length(g.to_networkx()):
        for v, d in row.items():
            dist[u, v] = d
    return dist


def _solve(dist: np.ndarray, start: int, end: int | None) -> tuple[int, list[int]]:
    """
    Shortest Hamiltonian path in the metric closure from `start`, ending at
    `end`, or returning to `start` when `end` is None; returns (length, order)
    """
    n = dist.shape[0]
    if n == 1:
        return 0, [start]
    full = (1 << n) - 1
    start_bit = 1 << start
    table = np.full((1 << n, n), INF, dtype=np.int64)
    parent = np.full((1 << n, n), -1, dtype=np.int64)
    table[start_bit, start] = 0

    for mask in range(1 << n):
        if not mask & start_bit or mask == start_bit:
            continue
        last = np.array([k for k in range(n) if mask >> k & 1 and k != start], dtype=np.int64)
        previous = mask ^ (1 << last)
        # candidates[i, j]: reach last[i] from j after visiting previous[i]
        candidates = table[previous] + dist[:, last].T
        best = candidates.argmin(axis=1)
        table[mask, last] = candidates[np.arange(len(last)), best]
        parent[mask, last] = best

    if end is None:
        closing = table[full] + dist[:, start]
        last = int(closing.argmin())
        value = int(closing[last])
    else:
        last = end
        value = int(table[full, end])

    order = [last]
    mask = full
    while last != start:
        previous = int(parent[mask, last])
        mask ^= 1 << last
        last = previous
        order.append(last)
    order.reverse()
    return value, order


def oracle_opt_tour(g: Graph, cutoff: int | None = None) -> int:
    _check_cutoff(g, cutoff)
    value, _ = _solve(distance_matrix(g), 0, None)
    return value


def oracle_opt_path(g: Graph, s: int, t: int, cutoff: int | None = None) -> int:
    check_vertex(g.vertex_count, s, "s")
    check_vertex(g.vertex_count, t, "t")
    _check_cutoff(g, cutoff)
    if s == t:
        return oracle_opt_tour(g, cutoff)
    value, _ = _solve(distance_matrix(g), s, t)
    return value


def oracle_walk(g: Graph, s: int, t: int, cutoff: int | None = None) -> Multigraph:
    """Optimal closed (s == t) or s-t spanning walk, expanded through BFS paths"""
    check_vertex(g.vertex_count, s, "s")
    check_vertex(g.vertex_count, t, "t")
    _check_cutoff(g, cutoff)
    value, order = _solve(distance_matrix(g), s, None if s == t else t)
    if s == t and len(order) > 1:
        order.append(order[0])

    graph = g.to_networkx()
    edges = []
    for a, b in zip(order, order[1:]):
        path = nx.shortest_path(graph, a, b)
        edges.extend(zip(path, path[1:]))
    walk = Multigraph.from_edges(g.vertex_count, edges)
    logger.debug(f"exact walk from {s} to {t}: {value} edges")
    return walk
