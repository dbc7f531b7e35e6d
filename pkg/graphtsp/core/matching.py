"""
Minimum-weight perfect matching with exact weights and lexicographic tie-breaking
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from graphtsp.core.errors import NoPerfectMatchingError
from graphtsp.core.graph import Graph


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PerfectMatching:
    edges: frozenset[int]
    weight: Fraction


def min_weight_perfect_matching(g: Graph, w: Sequence[Fraction | int]) -> PerfectMatching:
    """
    Perfect matching of minimum total weight

    Among optima the edge-id set whose sorted tuple is lexicographically
    smallest wins. Weights are scaled to integers and shifted by a
    tie-breaking term below the weight resolution, then handed to the
    blossom max-weight matching with maximum cardinality.
    """
    n, m = g.vertex_count, g.edge_count
    if len(w) != m:
        raise ValueError(f"expected {m} weights, got {len(w)}")
    if n % 2:
        raise NoPerfectMatchingError(f"odd vertex count {n}")
    if n == 0:
        return PerfectMatching(frozenset(), Fraction(0))

    weights = [Fraction(x) for x in w]
    scale = math.lcm(*(x.denominator for x in weights)) if weights else 1
    # score(e_i) = W_i * 2^(m+1) - 2^(m-i); the penalty sum never reaches 2^(m+1)
    scores = [int(x * scale) * (1 << (m + 1)) - (1 << (m - i)) for i, x in enumerate(weights)]
    top = max(scores, default=0) + 1

    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for eid, (u, v) in enumerate(g.edges):
        graph.add_edge(u, v, weight=top - scores[eid])
    matched = nx.max_weight_matching(graph, maxcardinality=True, weight="weight")

    if 2 * len(matched) != n:
        raise NoPerfectMatchingError(
            f"largest matching covers {2 * len(matched)} of {n} vertices"
        )
    ids = frozenset(g.edge_id(u, v) for u, v in matched)
    total = sum((weights[e] for e in ids), Fraction(0))
    logger.debug(f"matched {len(ids)} edges of total weight {total}")
    return PerfectMatching(ids, total)


def third_bound_check(g: Graph, w: Sequence[Fraction | int], m: PerfectMatching) -> bool:
    """Whether the matching weighs at most a third of the total edge weight"""
    return 3 * m.weight <= sum((Fraction(x) for x in w), Fraction(0))
