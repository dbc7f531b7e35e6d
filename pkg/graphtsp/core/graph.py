"""
Graph and multigraph types with block decomposition, BFS distances and Euler traversal
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import networkx as nx

from graphtsp.core.errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    EdgeCountError,
    EulerError,
    InvalidVertexError,
    MalformedEdgeError,
    MalformedHeaderError,
    SelfLoopError,
    UnreachableVertexError,
    VertexRangeError,
    require,
)


logger = logging.getLogger(__name__)

Edge = tuple[int, int]

# Key of the temporary s-t edge used to turn an open walk into a circuit
_VIRTUAL = "virtual"


def normalize(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def check_vertex(vertex_count: int, v: int, name: str = "vertex") -> None:
    if not 0 <= v < vertex_count:
        raise InvalidVertexError(f"{name} {v} is not in 0..{vertex_count - 1}")


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices 0..vertex_count-1

    Edge ids are positions in `edges`; every edge is stored as (min, max).
    `adjacency[v]` lists (neighbor, edge id) pairs in edge id order.
    """
    vertex_count: int
    edges: tuple[Edge, ...] = ()
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        n = int(self.vertex_count)
        if n < 0:
            raise VertexRangeError(f"vertex count {n} is negative")
        normalized: list[Edge] = []
        seen: set[Edge] = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            edge = normalize(u, v)
            if edge in seen:
                raise DuplicateEdgeError(f"duplicate edge {edge}")
            seen.add(edge)
            normalized.append(edge)

        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(normalized):
            adjacency[u].append((v, eid))
            adjacency[v].append((u, eid))

        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adjacency))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {edge: eid for eid, edge in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int | None:
        return self.edge_index.get(normalize(u, v))

    def incident(self, v: int) -> tuple[int, ...]:
        return tuple(eid for _, eid in self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(w for w, _ in self.adjacency[v])

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def to_networkx(self) -> nx.Graph:
        """Vertices 0..n-1, edges carry their id as attribute 'id'"""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        for eid, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, id=eid)
        return graph

    def is_connected(self) -> bool:
        if self.vertex_count <= 1:
            return True
        return nx.is_connected(self.to_networkx())

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph relabelled to 0..k-1, plus the local-to-global vertex map"""
        labels = tuple(sorted(set(vertices)))
        local = {v: i for i, v in enumerate(labels)}
        edges = tuple(
            (local[u], local[v]) for u, v in self.edges if u in local and v in local
        )
        return Graph(len(labels), edges), labels

    def edge_subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        """Spanning subgraph keeping the given edges in increasing id order"""
        return Graph(self.vertex_count, tuple(self.edges[e] for e in sorted(set(edge_ids))))

    def with_edge(self, u: int, v: int) -> tuple["Graph", int, bool]:
        """Graph containing edge {u, v}, the id of that edge, and whether it was added"""
        eid = self.edge_id(u, v)
        if eid is not None:
            return self, eid, False
        return Graph(self.vertex_count, self.edges + (normalize(u, v),)), self.edge_count, True


@dataclass(frozen=True)
class Multigraph:
    """Edge multiset over vertices 0..vertex_count-1, sorted by edge"""
    vertex_count: int
    edge_multiset: tuple[tuple[Edge, int], ...] = ()

    def __post_init__(self):
        merged: Counter = Counter()
        for (u, v), mult in self.edge_multiset:
            check_vertex(self.vertex_count, u)
            check_vertex(self.vertex_count, v)
            if u == v:
                raise EulerError(f"self-loop at vertex {u}")
            if mult < 1:
                raise ValueError(f"multiplicity {mult} of edge ({u}, {v}) is not positive")
            merged[normalize(u, v)] += int(mult)
        object.__setattr__(self, "edge_multiset", tuple(sorted(merged.items())))

    @classmethod
    def from_counts(cls, vertex_count: int, counts: Mapping[Edge, int]) -> "Multigraph":
        return cls(vertex_count, tuple((e, k) for e, k in counts.items() if k > 0))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Edge]) -> "Multigraph":
        return cls.from_counts(vertex_count, Counter(normalize(u, v) for u, v in edges))

    @cached_property
    def counts(self) -> dict[Edge, int]:
        return dict(self.edge_multiset)

    @property
    def edge_count(self) -> int:
        return sum(k for _, k in self.edge_multiset)

    def multiplicity(self, u: int, v: int) -> int:
        return self.counts.get(normalize(u, v), 0)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for (u, v), k in self.edge_multiset:
            deg[u] += k
            deg[v] += k
        return tuple(deg)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    @property
    def odd_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.degrees) if d % 2)

    def is_spanning(self) -> bool:
        return self.vertex_count <= 1 or all(self.degrees)

    def is_connected(self) -> bool:
        """True when the non-isolated vertices form one component"""
        graph = nx.Graph()
        graph.add_edges_from(e for e, _ in self.edge_multiset)
        return graph.number_of_nodes() == 0 or nx.is_connected(graph)

    def relabeled(self, labels: tuple[int, ...], vertex_count: int) -> "Multigraph":
        """Map local vertex i to labels[i] inside a graph of vertex_count vertices"""
        return Multigraph(
            vertex_count,
            tuple(((labels[u], labels[v]), k) for (u, v), k in self.edge_multiset),
        )

    def __add__(self, other: "Multigraph") -> "Multigraph":
        if self.vertex_count != other.vertex_count:
            raise ValueError("multigraphs live on different vertex sets")
        return Multigraph(self.vertex_count, self.edge_multiset + other.edge_multiset)


@dataclass(frozen=True)
class BlockDecomposition:
    """
    Blocks of a connected graph

    `block_edges[i]` holds the edge ids of block i; `block_cut_tree` lists
    (block index, cut vertex) incidences.
    """
    blocks: tuple[frozenset[int], ...]
    block_edges: tuple[tuple[int, ...], ...]
    cut_vertices: frozenset[int]
    block_cut_tree: tuple[tuple[int, int], ...]


def blocks(g: Graph) -> BlockDecomposition:
    if g.vertex_count == 0 or not g.is_connected():
        raise DisconnectedGraphError("block decomposition needs a connected graph")
    if g.vertex_count == 1:
        return BlockDecomposition((frozenset({0}),), ((),), frozenset(), ())

    graph = g.to_networkx()
    found = []
    for component in nx.biconnected_component_edges(graph):
        ids = tuple(sorted(g.edge_index[normalize(u, v)] for u, v in component))
        vertices = frozenset(x for eid in ids for x in g.edges[eid])
        found.append((min(vertices), tuple(sorted(vertices)), vertices, ids))
    found.sort(key=lambda item: (item[0], item[1]))

    cut_vertices = frozenset(nx.articulation_points(graph))
    tree = tuple(
        (i, v)
        for i, (_, ordered, _, _) in enumerate(found)
        for v in ordered
        if v in cut_vertices
    )
    return BlockDecomposition(
        blocks=tuple(item[2] for item in found),
        block_edges=tuple(item[3] for item in found),
        cut_vertices=cut_vertices,
        block_cut_tree=tree,
    )


def is_two_vertex_connected(g: Graph) -> bool:
    if g.vertex_count < 2 or not g.is_connected():
        return False
    return next(nx.articulation_points(g.to_networkx()), None) is None


def bfs_distance(g: Graph, s: int, t: int) -> tuple[int, tuple[Edge, ...]]:
    """Hop distance from s to t and one shortest path as oriented vertex pairs"""
    check_vertex(g.vertex_count, s, "s")
    check_vertex(g.vertex_count, t, "t")
    if s == t:
        return 0, ()
    try:
        path = nx.shortest_path(g.to_networkx(), s, t)
    except nx.NetworkXNoPath:
        raise UnreachableVertexError(f"vertex {t} is unreachable from {s}") from None
    return len(path) - 1, tuple(zip(path, path[1:]))


def euler_traversal(m: Multigraph, s: int, t: int) -> tuple[Edge, ...]:
    """Walk from s to t that uses every edge copy of m exactly once"""
    check_vertex(m.vertex_count, s, "s")
    check_vertex(m.vertex_count, t, "t")
    if m.edge_count == 0:
        if s != t:
            raise EulerError(f"empty multigraph has no walk from {s} to {t}")
        return ()

    expected = set() if s == t else {s, t}
    odd = set(m.odd_vertices)
    if odd != expected:
        raise EulerError(
            f"odd-degree vertices {sorted(odd)} do not match endpoints {sorted(expected)}"
        )
    if not m.is_connected() or m.degree(s) == 0 or m.degree(t) == 0:
        raise EulerError("multigraph support is disconnected from the walk endpoints")

    graph = nx.MultiGraph()
    for (u, v), k in m.edge_multiset:
        for _ in range(k):
            graph.add_edge(u, v)
    if s != t:
        graph.add_edge(s, t, key=_VIRTUAL)

    circuit = list(nx.eulerian_circuit(graph, source=s, keys=True))
    if s == t:
        walk = [(u, v) for u, v, _ in circuit]
    else:
        i = next(i for i, (_, _, key) in enumerate(circuit) if key == _VIRTUAL)
        tail = circuit[i][0]
        walk = [(u, v) for u, v, _ in circuit[i + 1:] + circuit[:i]]
        if tail == s:
            walk = [(v, u) for u, v in reversed(walk)]

    require(len(walk) == m.edge_count, "euler walk length differs from edge count")
    return tuple(walk)


def parse_graph(text: bytes | str) -> Graph:
    """Parse the 'n m' header plus m 'u v' edge lines; '#' lines are comments"""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedHeaderError("input is not UTF-8 text") from e

    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    first_seen: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 2:
                raise MalformedHeaderError(f"expected 'n m', got {line!r}", lineno)
            try:
                n, m = int(fields[0]), int(fields[1])
            except ValueError:
                raise MalformedHeaderError(f"non-integer header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise MalformedHeaderError(f"negative counts in header {line!r}", lineno)
            header = (n, m)
            continue

        if len(fields) != 2:
            raise MalformedEdgeError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise MalformedEdgeError(f"non-integer edge {line!r}", lineno) from None
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"edge {u} {v} has an endpoint outside 0..{n - 1}", lineno)
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}", lineno)
        edge = normalize(u, v)
        if edge in first_seen:
            raise DuplicateEdgeError(f"edge {u} {v} already given on line {first_seen[edge]}", lineno)
        first_seen[edge] = lineno
        edges.append(edge)

    if header is None:
        raise MalformedHeaderError("missing 'n m' header")
    if len(edges) != header[1]:
        raise EdgeCountError(f"header announces {header[1]} edges, found {len(edges)}")
    return Graph(header[0], tuple(edges))


def format_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{g.vertex_count} {g.edge_count}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
