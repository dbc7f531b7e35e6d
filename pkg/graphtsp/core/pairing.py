"""
Removable pairings, cubic gadget expansion and Eulerian multigraph assembly
"""
import itertools
import logging
import random
from collections import Counter
from dataclasses import dataclass, replace
from typing import Sequence

import networkx as nx

from graphtsp.config import settings
from graphtsp.core.circulation import (
    ArcKind,
    Circulation,
    CirculationNetwork,
    aggregator_node,
    vertex_node,
)
from graphtsp.core.errors import NotTwoConnectedError, PairingError, require
from graphtsp.core.graph import Edge, Graph, Multigraph, is_two_vertex_connected, normalize
from graphtsp.core.matching import PerfectMatching


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RemovablePairing:
    """
    Removable edge set R and disjoint pairs P over `base_graph`

    `origin[e]` is the id in the source graph of base edge e, or -1 for an
    added s-t edge. `path_edge` is the base id of the s-t edge in path mode.
    """
    base_graph: Graph
    origin: tuple[int, ...]
    removable: frozenset[int]
    pairs: tuple[tuple[int, int], ...]
    path_edge: int | None = None
    augmented: bool = False

    @property
    def paired_edges(self) -> frozenset[int]:
        return frozenset(e for pair in self.pairs for e in pair)

    def shared_vertex(self, pair: tuple[int, int]) -> int:
        common = set(self.base_graph.edges[pair[0]]) & set(self.base_graph.edges[pair[1]])
        if len(common) != 1:
            raise PairingError(f"paired edges {pair} do not share exactly one vertex")
        return common.pop()

    def with_edge(self, s: int, t: int) -> "RemovablePairing":
        """Same pairing over base_graph plus edge {s, t}, recorded as the path edge"""
        base, eid, added = self.base_graph.with_edge(s, t)
        origin = self.origin + ((-1,) if added else ())
        return replace(self, base_graph=base, origin=origin, path_edge=eid, augmented=added)

    def is_connected_without(self, deleted: set[int]) -> bool:
        base = self.base_graph
        components = nx.utils.UnionFind(range(base.vertex_count))
        for eid, (u, v) in enumerate(base.edges):
            if eid not in deleted:
                components.union(u, v)
        return len({components[v] for v in range(base.vertex_count)}) <= 1

    def validate(
        self,
        exhaustive_pairs: int | None = None,
        samples: int | None = None,
        seed: int = 0,
    ) -> None:
        """
        Check pair structure and the deletion property

        Every maximal deletion set (all unpaired removable edges plus one edge
        of each pair) must leave base_graph connected. All 2^|P| choices are
        tried up to `exhaustive_pairs` pairs, a seeded sample otherwise.
        """
        exhaustive_pairs = settings.PAIRING_EXHAUSTIVE_PAIRS if exhaustive_pairs is None else exhaustive_pairs
        samples = settings.PAIRING_SAMPLES if samples is None else samples

        seen: set[int] = set()
        for pair in self.pairs:
            a, b = pair
            require(a != b and a in self.removable and b in self.removable, f"pair {pair} not removable")
            require(not ({a, b} & seen), f"edge of pair {pair} already paired")
            seen.update(pair)
            v = self.shared_vertex(pair)
            require(self.base_graph.degree(v) >= 3, f"pair {pair} meets at degree-2 vertex {v}")

        unpaired = set(self.removable) - seen
        if len(self.pairs) <= exhaustive_pairs:
            choices = itertools.product((0, 1), repeat=len(self.pairs))
        else:
            rng = random.Random(seed)
            choices = (tuple(rng.randrange(2) for _ in self.pairs) for _ in range(samples))
        for choice in choices:
            deleted = unpaired | {pair[c] for pair, c in zip(self.pairs, choice)}
            require(self.is_connected_without(deleted), f"deleting {sorted(deleted)} disconnects the graph")


def extract_pairing(net: CirculationNetwork, f: Circulation) -> RemovablePairing:
    """
    Removable pairing read off the support of an optimal circulation

    Every in-vertex with a positive back-arc (the root needs two) pairs its
    smallest (tail, edge id) back-arc with its outgoing tree edge; all other
    support back-arcs are removable on their own.
    """
    g, tree = net.graph, net.tree
    back_by_edge = {b.edge: b for b in tree.back_edges}
    support_back = [
        arc.edge for arc, flow in zip(net.arcs, f.flow) if arc.kind == ArcKind.BACK and flow > 0
    ]
    source_ids = sorted(set(tree.tree_edges) | set(support_back))
    base = g.edge_subgraph(source_ids)
    to_base = {src: j for j, src in enumerate(source_ids)}

    removable: set[int] = set()
    pairs: list[tuple[int, int]] = []
    root = vertex_node(tree.root)
    for in_vertex, tree_edge in zip(net.in_vertices, net.outgoing_edge):
        incoming = sorted(
            (
                net.arcs[i].edge
                for i in net.arcs_into(aggregator_node(in_vertex), ArcKind.BACK)
                if f.flow[i] > 0
            ),
            key=lambda e: (back_by_edge[e].descendant, e),
        )
        removable.update(to_base[e] for e in incoming)
        if len(incoming) >= (2 if in_vertex == root else 1):
            pair = tuple(sorted((to_base[incoming[0]], to_base[tree_edge])))
            pairs.append(pair)
            removable.add(to_base[tree_edge])

    n = g.vertex_count
    require(base.is_connected() and all(base.degree(v) for v in range(n)), "circulation support is not spanning")
    require(is_two_vertex_connected(base), "circulation support is not 2-vertex-connected")
    require(
        base.edge_count == (n - 1) + len(removable) - len(pairs),
        "support edge count differs from (n-1) + |R| - |P|",
    )
    logger.debug(f"pairing: |E|={base.edge_count} |R|={len(removable)} |P|={len(pairs)}")
    return RemovablePairing(base, tuple(source_ids), frozenset(removable), tuple(sorted(pairs)))


@dataclass(frozen=True)
class CubicExpansion:
    """
    Cubic graph whose first `core_count` edges are the base graph edges in
    base id order; the remaining edges are gadget edges
    """
    cubic_graph: Graph
    core_count: int
    vertex_origin: tuple[int, ...]

    def edge_kind(self, e: int) -> str:
        return "core" if e < self.core_count else "gadget"


def _tree_gadget(leaves: int, rooted: bool) -> tuple[int, list[Edge], list[int], int | None]:
    """
    Caterpillar with the given number of leaves whose inner vertices have
    degree 3; a rooted one has a root of tree-degree 2

    Returns (vertex count, edges, leaf ids, root id).
    """
    if not rooted and leaves == 2:
        return 2, [(0, 1)], [0, 1], None
    spine = leaves - 1 if rooted else leaves - 2
    edges = [(i, i + 1) for i in range(spine - 1)]
    leaf_ids: list[int] = []
    next_id = spine
    for i in range(spine):
        wanted = 3 - (i > 0) - (i < spine - 1) - (rooted and i == 0)
        for _ in range(wanted):
            edges.append((i, next_id))
            leaf_ids.append(next_id)
            next_id += 1
    require(len(leaf_ids) == leaves, "gadget tree has the wrong number of leaves")
    return next_id, edges, leaf_ids, 0 if rooted else None


def cubic_expand(rp: RemovablePairing) -> CubicExpansion:
    base = rp.base_graph
    n = base.vertex_count
    if n < 3 or not is_two_vertex_connected(base):
        raise NotTwoConnectedError("cubic expansion needs a 2-vertex-connected graph, n >= 3")

    pairs_at: dict[int, list[tuple[int, int]]] = {}
    for pair in rp.pairs:
        pairs_at.setdefault(rp.shared_vertex(pair), []).append(pair)

    vertex_origin: list[int] = []
    gadget: list[Edge] = []
    attach: dict[tuple[int, int], int] = {}

    for v in range(n):
        incident = sorted(base.incident(v))
        first = len(vertex_origin)
        if len(incident) == 2:
            north, west, south, east = range(first, first + 4)
            vertex_origin.extend([v] * 4)
            gadget += [(north, west), (west, south), (south, east), (east, north), (west, east)]
            attach[(v, incident[0])] = north
            attach[(v, incident[1])] = south
        elif len(incident) == 3:
            vertex_origin.append(v)
            for e in incident:
                attach[(v, e)] = first
        else:
            count, edges, leaves, root = _tree_gadget(len(incident) // 2, len(incident) % 2 == 1)
            vertex_origin.extend([v] * count)
            gadget += [(first + a, first + b) for a, b in edges]

            groups = [list(pair) for pair in pairs_at.get(v, [])]
            placed = {e for group in groups for e in group}
            rest = [e for e in incident if e not in placed]
            while len(groups) < len(leaves):
                groups.append(rest[:2])
                rest = rest[2:]
            for leaf, group in zip(leaves, groups):
                for e in group:
                    attach[(v, e)] = first + leaf
            if root is not None:
                require(len(rest) == 1, "odd-degree gadget root needs exactly one leftover edge")
                attach[(v, rest[0])] = first + root
            else:
                require(not rest, "even-degree gadget has leftover edges")

    core = [(attach[(u, e)], attach[(v, e)]) for e, (u, v) in enumerate(base.edges)]
    cubic = Graph(len(vertex_origin), tuple(core + gadget))

    require(all(cubic.degree(x) == 3 for x in range(cubic.vertex_count)), "expansion is not cubic")
    graph = cubic.to_networkx()
    require(nx.is_connected(graph) and not nx.has_bridges(graph), "expansion is not 2-edge-connected")
    for a, b in rp.pairs:
        require(bool(set(cubic.edges[a]) & set(cubic.edges[b])), f"pair {(a, b)} is not co-located")
    return CubicExpansion(cubic, base.edge_count, tuple(vertex_origin))


def assign_weights(
    exp: CubicExpansion,
    rp: RemovablePairing,
    path_edge: int | None = None,
    dist: int | None = None,
) -> tuple[int, ...]:
    """
    -1 on removable core edges, +1 on other core edges, 0 on gadget edges;
    in path mode the core image of the s-t edge weighs dist(s, t)
    """
    weights = [0] * exp.cubic_graph.edge_count
    for e in range(exp.core_count):
        weights[e] = -1 if e in rp.removable else 1
    if path_edge is not None:
        if not 0 <= path_edge < exp.core_count:
            raise PairingError(f"path edge {path_edge} is not a core edge")
        if dist is None:
            raise ValueError("path mode needs dist(s, t)")
        weights[path_edge] = dist
    return tuple(weights)


def _tour_counts(rp: RemovablePairing, m: PerfectMatching) -> Counter:
    counts: Counter = Counter()
    for e, edge in enumerate(rp.base_graph.edges):
        mult = 1
        if e in m.edges:
            mult = 0 if e in rp.removable else 2
        if mult:
            counts[edge] += mult
    return counts


def _core_delta(rp: RemovablePairing, m: PerfectMatching, skip: int | None = None) -> int:
    return sum(
        -1 if e in rp.removable else 1
        for e in m.edges
        if e < rp.base_graph.edge_count and e != skip
    )


def assemble_tour(rp: RemovablePairing, exp: CubicExpansion, m: PerfectMatching) -> Multigraph:
    """Base edges with matched removable edges dropped and matched others doubled"""
    base = rp.base_graph
    tour = Multigraph.from_counts(base.vertex_count, _tour_counts(rp, m))
    require(not tour.odd_vertices, f"odd-degree vertices {tour.odd_vertices} in tour multigraph")
    require(tour.is_connected() and tour.is_spanning(), "tour multigraph is not connected and spanning")
    require(tour.edge_count == base.edge_count + _core_delta(rp, m), "tour edge count mismatch")
    return tour


def assemble_path(
    rp: RemovablePairing,
    exp: CubicExpansion,
    m: PerfectMatching,
    s: int,
    t: int,
    shortest_path: Sequence[Edge],
) -> Multigraph:
    """
    Tour multigraph over base plus the s-t edge, then a single copy of that
    edge is removed, or all copies are replaced by a shortest s-t path
    """
    if rp.path_edge is None:
        raise PairingError("pairing has no s-t edge")
    base = rp.base_graph
    e_prime = base.edges[rp.path_edge]
    counts = _tour_counts(rp, m)
    if counts[e_prime] == 1:
        del counts[e_prime]
    else:
        counts.pop(e_prime, None)
        for a, b in shortest_path:
            counts[normalize(a, b)] += 1
    path = Multigraph.from_counts(base.vertex_count, counts)

    dist = len(shortest_path)
    require(set(path.odd_vertices) == {s, t}, f"odd-degree vertices {path.odd_vertices} are not {{s, t}}")
    require(path.is_connected() and path.is_spanning(), "path multigraph is not connected and spanning")
    expected = base.edge_count - 1 + _core_delta(rp, m, skip=rp.path_edge)
    if rp.path_edge in m.edges:
        expected += dist
    require(path.edge_count == expected, "path edge count mismatch")
    removable = len(rp.removable - {rp.path_edge})
    require(
        3 * path.edge_count <= 4 * (base.edge_count - 1) - 2 * removable + dist,
        "path edge count exceeds 4/3|E| - 2/3|R| + dist/3",
    )
    return path
