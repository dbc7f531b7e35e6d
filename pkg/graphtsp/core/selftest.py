"""
Built-in invariant corpus: every instance is solved, checked against the
exact optimum and its certificate bounds, and reported on one line
"""
import logging
from typing import Callable, TextIO

import networkx as nx

from graphtsp.core import bounds
from graphtsp.core.errors import require
from graphtsp.core.generators import (
    from_networkx,
    gap_path,
    gap_tour,
    random_2vc,
    random_blocks,
    random_cubic,
    random_subcubic,
)
from graphtsp.core.graph import Graph, normalize
from graphtsp.core.oracle import oracle_opt_path, oracle_opt_tour
from graphtsp.core.pipeline import format_fraction, tsp_path, tsp_tour


logger = logging.getLogger(__name__)


def cycle(n: int) -> Graph:
    return Graph(n, tuple(normalize(i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


DIAMOND = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2)))
BOWTIE = Graph(5, ((0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)))


def tour_corpus() -> list[tuple[str, Callable[[], Graph]]]:
    return [
        ("cycle(5)", lambda: cycle(5)),
        ("cycle(8)", lambda: cycle(8)),
        ("diamond", lambda: DIAMOND),
        ("bowtie", lambda: BOWTIE),
        ("petersen", lambda: from_networkx(nx.petersen_graph())),
        ("complete(5)", lambda: from_networkx(nx.complete_graph(5))),
        ("gap_tour(1)", lambda: gap_tour(1)),
        ("gap_tour(2)", lambda: gap_tour(2)),
        ("gap_tour(3)", lambda: gap_tour(3)),
        ("random_2vc(10,14,1)", lambda: random_2vc(10, 14, 1)),
        ("random_2vc(9,20,2)", lambda: random_2vc(9, 20, 2)),
        ("random_cubic(10,1)", lambda: random_cubic(10, 1)),
        ("random_subcubic(12,3)", lambda: random_subcubic(12, 3)),
        ("random_blocks(3,4,5)", lambda: random_blocks(3, 4, 5)),
    ]


def path_corpus() -> list[tuple[str, Callable[[], tuple[Graph, int, int]]]]:
    return [
        ("cycle(6) 0-3", lambda: (cycle(6), 0, 3)),
        ("path(5) 0-4", lambda: (path_graph(5), 0, 4)),
        ("diamond 1-3", lambda: (DIAMOND, 1, 3)),
        ("bowtie 1-3", lambda: (BOWTIE, 1, 3)),
        ("gap_path(1)", lambda: gap_path(1)),
        ("gap_path(2)", lambda: gap_path(2)),
        ("gap_path(3)", lambda: gap_path(3)),
        ("random_2vc(8,12,4) 0-5", lambda: (random_2vc(8, 12, 4), 0, 5)),
    ]


def _check_tour(g: Graph) -> str:
    sol = tsp_tour(g)
    olp = sol.certificate.olp
    opt = oracle_opt_tour(g, cutoff=g.vertex_count)
    require(olp <= opt <= sol.edge_count, f"olp {olp} <= opt {opt} <= {sol.edge_count} fails")
    require(sol.edge_count <= bounds.tour_guarantee(olp), "tour exceeds 1.4609 OLP")
    return f"edges={sol.edge_count} olp={format_fraction(olp)} opt={opt} chosen={sol.certificate.chosen}"


def _check_path(g: Graph, s: int, t: int) -> str:
    sol = tsp_path(g, s, t)
    lower = sol.certificate.lower_bound
    opt = oracle_opt_path(g, s, t, cutoff=g.vertex_count)
    require(lower <= opt <= sol.edge_count, f"lower {lower} <= opt {opt} <= {sol.edge_count} fails")
    return f"edges={sol.edge_count} lower={format_fraction(lower)} opt={opt} chosen={sol.certificate.chosen}"


def selftest(out: TextIO) -> int:
    """Run the corpus, print one line per instance, return the number of failures"""
    failures = 0
    cases = [("tour", name, lambda build=build: _check_tour(build())) for name, build in tour_corpus()]
    cases += [("path", name, lambda build=build: _check_path(*build())) for name, build in path_corpus()]
    for kind, name, check in cases:
        try:
            detail = check()
            out.write(f"ok   {kind} {name} {detail}\n")
        except Exception as e:
            failures += 1
            logger.error(f"selftest {kind} {name} failed: {e}", exc_info=True)
            out.write(f"FAIL {kind} {name} {type(e).__name__}: {e}\n")
    out.write(f"{len(cases) - failures}/{len(cases)} passed\n")
    return failures
