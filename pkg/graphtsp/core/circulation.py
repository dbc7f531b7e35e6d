"""
DFS-based circulation network and its minimum-cost integral circulation

Node labels: "v{u}" is original vertex u (the root's node is an in-vertex,
every other "v{u}" is an out-vertex), "v{a}/{c}" is the in-vertex splitting
the tree edge from a to its child c, and "agg:{in-vertex}" collects the
back-arcs entering that in-vertex.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import networkx as nx

from graphtsp.core.errors import (
    CertificateError,
    DisconnectedGraphError,
    InfeasibleNetworkError,
    NotTwoConnectedError,
    require,
)
from graphtsp.core.graph import Graph, check_vertex, is_two_vertex_connected


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BackEdge:
    descendant: int
    ancestor: int
    edge: int


@dataclass(frozen=True)
class DfsTree:
    root: int
    parent: tuple[int, ...]
    tree_edges: tuple[int, ...]
    back_edges: tuple[BackEdge, ...]
    order: tuple[int, ...]
    depth: tuple[int, ...]
    parent_edge: tuple[int, ...]

    def children(self, v: int) -> tuple[int, ...]:
        return tuple(c for c in self.order if self.parent[c] == v and c != self.root)

    def child_toward(self, ancestor: int, descendant: int) -> int:
        """Child of `ancestor` on the tree path down to `descendant`"""
        v = descendant
        while self.parent[v] != ancestor:
            v = self.parent[v]
            if v < 0:
                raise ValueError(f"{ancestor} is not an ancestor of {descendant}")
        return v


def dfs_tree_max_x(g: Graph, x: Sequence[Fraction] | None, root: int = 0) -> DfsTree:
    """
    Depth-first tree that always follows the incident edge of largest x
    towards an unvisited vertex, ties broken by the smaller neighbor id
    """
    n = g.vertex_count
    check_vertex(n, root, "root")
    x = [Fraction(1)] * g.edge_count if x is None else [Fraction(v) for v in x]

    parent = [-1] * n
    parent_edge = [-1] * n
    depth = [0] * n
    visited = [False] * n
    visited[root] = True
    order = [root]
    tree_edges: list[int] = []
    stack = [root]
    while stack:
        u = stack[-1]
        best = None
        for v, eid in g.adjacency[u]:
            if not visited[v]:
                key = (x[eid], -v)
                if best is None or key > best[0]:
                    best = (key, v, eid)
        if best is None:
            stack.pop()
            continue
        _, v, eid = best
        visited[v] = True
        parent[v], parent_edge[v], depth[v] = u, eid, depth[u] + 1
        tree_edges.append(eid)
        order.append(v)
        stack.append(v)

    if len(order) != n:
        raise DisconnectedGraphError("DFS did not reach every vertex")

    in_tree = set(tree_edges)
    back_edges = []
    for eid, (u, v) in enumerate(g.edges):
        if eid in in_tree:
            continue
        desc, anc = (u, v) if depth[u] > depth[v] else (v, u)
        w = desc
        while w != -1 and w != anc:
            w = parent[w]
        if w != anc:
            raise CertificateError(f"non-tree edge {g.edges[eid]} is a cross edge")
        back_edges.append(BackEdge(desc, anc, eid))

    return DfsTree(
        root=root,
        parent=tuple(parent),
        tree_edges=tuple(tree_edges),
        back_edges=tuple(sorted(back_edges, key=lambda b: b.edge)),
        order=tuple(order),
        depth=tuple(depth),
        parent_edge=tuple(parent_edge),
    )


class ArcKind(str, Enum):
    TREE_UPPER = "tree-arc-upper"
    TREE_LOWER = "tree-arc-lower"
    BACK = "back-arc"
    AGGREGATOR_FREE = "aggregator-free"
    AGGREGATOR_PAID = "aggregator-paid"


@dataclass(frozen=True)
class Arc:
    tail: str
    head: str
    lower: int
    upper: int | None
    cost: int
    kind: ArcKind
    edge: int | None = None


@dataclass(frozen=True)
class CirculationNetwork:
    graph: Graph
    tree: DfsTree
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]
    in_vertices: tuple[str, ...]
    # tree edge leaving each in-vertex, aligned with in_vertices
    outgoing_edge: tuple[int, ...]

    def arcs_into(self, node: str, kind: ArcKind) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.arcs) if a.head == node and a.kind == kind)


@dataclass(frozen=True)
class Circulation:
    flow: tuple[int, ...]
    cost: int


def vertex_node(u: int) -> str:
    return f"v{u}"


def split_node(a: int, c: int) -> str:
    return f"v{a}/{c}"


def aggregator_node(in_vertex: str) -> str:
    return f"agg:{in_vertex}"


def in_vertex_of(tree: DfsTree, ancestor: int, descendant: int) -> str:
    """In-vertex receiving a back-arc from descendant up to ancestor"""
    if ancestor == tree.root:
        return vertex_node(ancestor)
    return split_node(ancestor, tree.child_toward(ancestor, descendant))


def build_network(g: Graph, t: DfsTree) -> CirculationNetwork:
    if g.vertex_count < 3 or not is_two_vertex_connected(g):
        raise NotTwoConnectedError("circulation network needs a 2-vertex-connected graph, n >= 3")
    root_children = t.children(t.root)
    require(len(root_children) == 1, f"DFS root has {len(root_children)} children")

    nodes: list[str] = []
    arcs: list[Arc] = []
    in_vertices: list[str] = []
    outgoing: list[int] = []

    def add_in_vertex(name: str, eid: int) -> None:
        nodes.append(name)
        nodes.append(aggregator_node(name))
        in_vertices.append(name)
        outgoing.append(eid)

    for v in t.order:
        if v == t.root:
            add_in_vertex(vertex_node(v), t.parent_edge[root_children[0]])
        else:
            nodes.append(vertex_node(v))

    for c in t.order:
        if c == t.root:
            continue
        a, eid = t.parent[c], t.parent_edge[c]
        if a == t.root:
            arcs.append(Arc(vertex_node(a), vertex_node(c), 1, None, 0, ArcKind.TREE_LOWER, eid))
        else:
            split = split_node(a, c)
            add_in_vertex(split, eid)
            arcs.append(Arc(vertex_node(a), split, 1, None, 0, ArcKind.TREE_UPPER, eid))
            arcs.append(Arc(split, vertex_node(c), 1, None, 0, ArcKind.TREE_LOWER, eid))

    for back in t.back_edges:
        head = aggregator_node(in_vertex_of(t, back.ancestor, back.descendant))
        arcs.append(Arc(vertex_node(back.descendant), head, 0, None, 0, ArcKind.BACK, back.edge))

    for name in in_vertices:
        agg = aggregator_node(name)
        arcs.append(Arc(agg, name, 0, 1, 0, ArcKind.AGGREGATOR_FREE))
        arcs.append(Arc(agg, name, 0, None, 1, ArcKind.AGGREGATOR_PAID))

    logger.debug(f"network: {len(nodes)} nodes, {len(arcs)} arcs, {len(in_vertices)} in-vertices")
    return CirculationNetwork(
        g, t, tuple(nodes), tuple(arcs), tuple(in_vertices), tuple(outgoing)
    )


def _check_optimal(net: CirculationNetwork, flow: Sequence[int]) -> None:
    residual = nx.MultiDiGraph()
    residual.add_nodes_from(net.nodes)
    for arc, f in zip(net.arcs, flow):
        if arc.upper is None or f < arc.upper:
            residual.add_edge(arc.tail, arc.head, weight=arc.cost)
        if f > arc.lower:
            residual.add_edge(arc.head, arc.tail, weight=-arc.cost)
    if nx.negative_edge_cycle(residual, weight="weight"):
        raise CertificateError("residual network has a negative-cost cycle")


def min_cost_circulation(net: CirculationNetwork) -> Circulation:
    """
    Integral minimum-cost circulation

    Lower bounds are moved into node demands and the remaining flow problem
    goes to network simplex; optimality is confirmed by the absence of a
    negative residual cycle.
    """
    graph = nx.MultiDiGraph()
    for node in net.nodes:
        graph.add_node(node, demand=0)
    for i, arc in enumerate(net.arcs):
        attrs = {"weight": arc.cost}
        if arc.upper is not None:
            attrs["capacity"] = arc.upper - arc.lower
        graph.add_edge(arc.tail, arc.head, key=i, **attrs)
        if arc.lower:
            graph.nodes[arc.tail]["demand"] += arc.lower
            graph.nodes[arc.head]["demand"] -= arc.lower

    try:
        _, flow_dict = nx.network_simplex(graph)
    except nx.NetworkXUnfeasible as e:
        raise InfeasibleNetworkError(f"no feasible circulation: {e}") from e

    flow = tuple(
        flow_dict[arc.tail][arc.head][i] + arc.lower for i, arc in enumerate(net.arcs)
    )
    for arc, f in zip(net.arcs, flow):
        require(isinstance(f, int), "non-integral flow value")
        require(f >= arc.lower and (arc.upper is None or f <= arc.upper), f"flow {f} violates {arc}")
    _check_optimal(net, flow)

    cost = sum(f * arc.cost for arc, f in zip(net.arcs, flow))
    logger.debug(f"min-cost circulation cost {cost}")
    return Circulation(flow, cost)


def back_flow(net: CirculationNetwork, f: Circulation, in_vertex: str) -> int:
    """Total flow on back-arcs entering the aggregator of in_vertex"""
    agg = aggregator_node(in_vertex)
    return sum(f.flow[i] for i in net.arcs_into(agg, ArcKind.BACK))


def circulation_cost_audit(net: CirculationNetwork, f: Circulation) -> int:
    """Recompute the cost as the sum over in-vertices of max(back flow - 1, 0)"""
    audited = sum(max(back_flow(net, f, v) - 1, 0) for v in net.in_vertices)
    if audited != f.cost:
        raise CertificateError(f"audited cost {audited} differs from arc-cost total {f.cost}")
    return audited


def dump_network(net: CirculationNetwork) -> str:
    """One arc per line: tail head lower upper cost provenance"""
    lines = [
        f"{a.tail} {a.head} {a.lower} {'inf' if a.upper is None else a.upper} {a.cost} {a.kind.value}"
        for a in net.arcs
    ]
    return "\n".join(lines) + "\n"
