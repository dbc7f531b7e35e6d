"""
Instance generators for the benchmark and self-test corpora

Every generator is a pure function of its parameters: the same spec always
yields the same edge list.
"""
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional

import networkx as nx
from pydantic import BaseModel, Field

from graphtsp.core.errors import InstanceError
from graphtsp.core.graph import Edge, Graph, is_two_vertex_connected, normalize, parse_graph


logger = logging.getLogger(__name__)

MAX_RESAMPLES = 1000


def from_networkx(graph: nx.Graph) -> Graph:
    graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    return Graph(graph.number_of_nodes(), tuple(sorted(normalize(u, v) for u, v in graph.edges())))


def _relabel(n: int, edges: list[Edge], rng: random.Random) -> Graph:
    labels = list(range(n))
    rng.shuffle(labels)
    return Graph(n, tuple(sorted(normalize(labels[u], labels[v]) for u, v in edges)))


def gap_tour(k: int) -> Graph:
    """
    Three paths of k edges each; their first vertices form one triangle and
    their last vertices another. Vertex p*(k+1) + i is vertex i of path p.
    """
    if k < 1:
        raise InstanceError(f"gap_tour needs k >= 1, got {k}")
    width = k + 1
    edges = [(p * width + i, p * width + i + 1) for p in range(3) for i in range(k)]
    starts = [p * width for p in range(3)]
    ends = [p * width + k for p in range(3)]
    for side in (starts, ends):
        edges += [(side[0], side[1]), (side[1], side[2]), (side[0], side[2])]
    return Graph(3 * width, tuple(sorted(normalize(u, v) for u, v in edges)))


def gap_path(k: int) -> tuple[Graph, int, int]:
    """gap_tour(k) with s and t at the middle of the first and second path"""
    g = gap_tour(k)
    return g, k // 2, (k + 1) + k // 2


def random_2vc(n: int, m: int, seed: int = 0) -> Graph:
    """
    Random ear decomposition: a cycle, ears carrying new vertices until all n
    exist, then single-edge ears between non-adjacent vertices up to m edges
    """
    if n < 3 or m < n or m > n * (n - 1) // 2:
        raise InstanceError(f"no simple 2-vertex-connected graph with n={n}, m={m}")
    rng = random.Random(seed)
    ears = m - n
    growing = rng.randint(0, min(ears, n - 3))
    cycle = n if growing == 0 else rng.randint(3, n - growing)

    edges = [(i, (i + 1) % cycle) for i in range(cycle)]
    # split the remaining n - cycle vertices over `growing` ears, each at least one
    cuts = sorted(rng.sample(range(1, n - cycle), growing - 1)) if growing else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [n - cycle])] if growing else []
    nxt = cycle
    for size in sizes:
        a, b = rng.sample(range(nxt), 2)
        chain = [a] + list(range(nxt, nxt + size)) + [b]
        edges += list(zip(chain, chain[1:]))
        nxt += size

    present = {normalize(u, v) for u, v in edges}
    for _ in range(ears - growing):
        free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
        chord = rng.choice(free)
        present.add(chord)
        edges.append(chord)

    g = _relabel(n, edges, rng)
    if not is_two_vertex_connected(g) or g.edge_count != m:
        raise InstanceError(f"ear construction failed for n={n}, m={m}, seed={seed}")
    return g


def random_cubic(n: int, seed: int = 0) -> Graph:
    """Random 3-regular graph, resampled until 2-vertex-connected"""
    if n < 4 or n % 2:
        raise InstanceError(f"no cubic graph on {n} vertices")
    rng = random.Random(seed)
    for _ in range(MAX_RESAMPLES):
        graph = nx.random_regular_graph(3, n, seed=rng.randrange(2**32))
        if nx.is_connected(graph) and nx.is_biconnected(graph):
            return from_networkx(graph)
    raise InstanceError(f"no 2-vertex-connected cubic sample for n={n}, seed={seed}")


def random_subcubic(n: int, seed: int = 0) -> Graph:
    """Hamiltonian cycle plus random chords between degree-2 vertices"""
    if n < 3:
        raise InstanceError(f"random_subcubic needs n >= 3, got {n}")
    rng = random.Random(seed)
    edges = [(i, (i + 1) % n) for i in range(n)]
    present = {normalize(u, v) for u, v in edges}
    chords = rng.randint(0, n // 2)
    open_vertices = list(range(n))
    for _ in range(chords):
        candidates = [
            (u, v)
            for i, u in enumerate(open_vertices)
            for v in open_vertices[i + 1:]
            if (u, v) not in present
        ]
        if not candidates:
            break
        u, v = rng.choice(candidates)
        present.add((u, v))
        edges.append((u, v))
        open_vertices.remove(u)
        open_vertices.remove(v)
    return _relabel(n, edges, rng)


def random_blocks(k: int, size: int, seed: int = 0) -> Graph:
    """k random 2-vertex-connected blocks glued into a tree at cut vertices"""
    if k < 1 or size < 3:
        raise InstanceError(f"random_blocks needs k >= 1 and size >= 3, got k={k}, size={size}")
    rng = random.Random(seed)
    n = 0
    edges: list[Edge] = []
    for _ in range(k):
        m = rng.randint(size, min(size * (size - 1) // 2, size + size // 2))
        block = random_2vc(size, m, rng.randrange(2**32))
        if n == 0:
            labels = list(range(size))
            n = size
        else:
            # local vertex 0 is glued onto an existing vertex
            labels = [rng.randrange(n)] + list(range(n, n + size - 1))
            n += size - 1
        edges += [(labels[u], labels[v]) for u, v in block.edges]
    return Graph(n, tuple(sorted(normalize(u, v) for u, v in edges)))


def grid(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise InstanceError(f"grid needs positive sides, got {a}x{b}")
    return from_networkx(nx.grid_2d_graph(a, b))


Family = Literal[
    "gap_tour", "gap_path", "random_2vc", "random_cubic", "random_subcubic", "random_blocks", "grid", "file"
]

# positional arguments per family; a trailing seed may be omitted
FAMILY_ARGS: dict[str, tuple[str, ...]] = {
    "gap_tour": ("k",),
    "gap_path": ("k",),
    "random_2vc": ("n", "m", "seed"),
    "random_cubic": ("n", "seed"),
    "random_subcubic": ("n", "seed"),
    "random_blocks": ("k", "size", "seed"),
    "grid": ("a", "b"),
    "file": ("path",),
}


@dataclass(frozen=True)
class Instance:
    name: str
    family: str
    graph: Graph
    s: int | None = None
    t: int | None = None


class InstanceSpec(BaseModel):
    """One generator invocation"""
    family: Family = Field(..., description="Generator family")
    k: Optional[int] = Field(None, description="Path length (gap families) or block count")
    n: Optional[int] = Field(None, description="Vertex count")
    m: Optional[int] = Field(None, description="Edge count (random_2vc)")
    size: Optional[int] = Field(None, description="Vertices per block (random_blocks)")
    a: Optional[int] = Field(None, description="Grid rows")
    b: Optional[int] = Field(None, description="Grid columns")
    seed: int = Field(0, description="Random seed")
    path: Optional[str] = Field(None, description="Graph file (file family)")

    class Config:
        json_schema_extra = {"example": {"family": "random_2vc", "n": 10, "m": 14, "seed": 1}}

    @property
    def name(self) -> str:
        args = [getattr(self, field) for field in FAMILY_ARGS[self.family]]
        return f"{self.family}({','.join(str(a) for a in args)})"

    def _require(self, *fields: str) -> list:
        missing = [f for f in fields if getattr(self, f) is None]
        if missing:
            raise InstanceError(f"{self.family} needs {', '.join(missing)}")
        return [getattr(self, f) for f in fields]

    def build(self) -> Instance:
        s = t = None
        if self.family == "gap_tour":
            g = gap_tour(*self._require("k"))
        elif self.family == "gap_path":
            g, s, t = gap_path(*self._require("k"))
        elif self.family == "random_2vc":
            g = random_2vc(*self._require("n", "m"), self.seed)
        elif self.family == "random_cubic":
            g = random_cubic(*self._require("n"), self.seed)
        elif self.family == "random_subcubic":
            g = random_subcubic(*self._require("n"), self.seed)
        elif self.family == "random_blocks":
            g = random_blocks(*self._require("k", "size"), self.seed)
        elif self.family == "grid":
            g = grid(*self._require("a", "b"))
        else:
            (path,) = self._require("path")
            try:
                g = parse_graph(Path(path).read_bytes())
            except OSError as e:
                raise InstanceError(f"cannot read {path}: {e}") from e
        logger.debug(f"built {self.name}: n={g.vertex_count} m={g.edge_count}")
        return Instance(self.name, self.family, g, s, t)


def parse_spec(text: str) -> InstanceSpec:
    """Parse 'family arg...' such as 'gap-tour 3' or 'random_2vc 10 14 1'"""
    tokens = text.split()
    if not tokens:
        raise InstanceError("empty instance spec")
    family = tokens[0].replace("-", "_")
    if family not in FAMILY_ARGS:
        raise InstanceError(f"unknown family {tokens[0]!r}")
    names = FAMILY_ARGS[family]
    args = tokens[1:]
    if not (len(args) == len(names) or (names[-1] == "seed" and len(args) == len(names) - 1)):
        raise InstanceError(f"{family} takes arguments {' '.join(names)}, got {len(args)}")
    values: dict = {"family": family}
    for name, raw in zip(names, args):
        if name == "path":
            values[name] = raw
            continue
        try:
            values[name] = int(raw)
        except ValueError:
            raise InstanceError(f"{family} argument {name} must be an integer, got {raw!r}") from None
    return InstanceSpec(**values)


def parse_spec_file(text: str) -> list[InstanceSpec]:
    """One spec per line; blank lines and '#' comments are skipped"""
    return [
        parse_spec(line)
        for line in (raw.strip() for raw in text.splitlines())
        if line and not line.startswith("#")
    ]
