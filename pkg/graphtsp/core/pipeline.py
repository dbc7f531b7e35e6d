"""
End-to-end graph-TSP and graph-TSPP solvers with certified edge-count bounds
"""
import logging
from collections import Counter
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Sequence

import networkx as nx

from graphtsp.config import settings
from graphtsp.core import bounds
from graphtsp.core.circulation import (
    ArcKind,
    aggregator_node,
    build_network,
    circulation_cost_audit,
    dfs_tree_max_x,
    min_cost_circulation,
    vertex_node,
)
from graphtsp.core.errors import DisconnectedGraphError, NotTwoConnectedError, require
from graphtsp.core.graph import (
    Edge,
    Graph,
    Multigraph,
    bfs_distance,
    blocks,
    check_vertex,
    euler_traversal,
    is_two_vertex_connected,
    normalize,
)
from graphtsp.core.held_karp import solve_held_karp, support_graph
from graphtsp.core.matching import min_weight_perfect_matching, third_bound_check
from graphtsp.core.oracle import oracle_walk
from graphtsp.core.pairing import (
    RemovablePairing,
    assemble_path,
    assemble_tour,
    assign_weights,
    cubic_expand,
    extract_pairing,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TourCertificate:
    olp: Fraction | None
    chosen: str
    blocks: int = 1
    algorithm_edges: int | None = None
    christofides_edges: int | None = None
    circulation_cost: int | None = None
    circulation_bound: Fraction | None = None
    pairing_bound: Fraction | None = None
    cost_bound: Fraction | None = None
    christofides_bound: Fraction | None = None
    subcubic_bound: Fraction | None = None
    analytic_bound: Fraction | None = None


@dataclass(frozen=True)
class TourSolution:
    multigraph: Multigraph
    walk: tuple[Edge, ...]
    certificate: TourCertificate

    @property
    def edge_count(self) -> int:
        return self.multigraph.edge_count


@dataclass(frozen=True)
class PathCertificate:
    lower_bound: Fraction | None
    chosen: str
    dist: int
    blocks: int = 1
    olp_path: Fraction | None = None
    olp_augmented: Fraction | None = None
    d: Fraction | None = None
    zeta: Fraction | None = None
    algorithm_edges: int | None = None
    baseline_edges: int | None = None
    exact_edges: int | None = None
    circulation_cost: int | None = None
    pairing_bound: Fraction | None = None
    cost_bound: Fraction | None = None
    main_bound: Fraction | None = None
    baseline_bound: int | None = None
    subcubic_bound: Fraction | None = None
    guarantee_bound: Fraction | None = None
    guarantee_constant: Fraction = bounds.PATH_CONSTANT


@dataclass(frozen=True)
class PathSolution:
    multigraph: Multigraph
    walk: tuple[Edge, ...]
    s: int
    t: int
    certificate: PathCertificate

    @property
    def edge_count(self) -> int:
        return self.multigraph.edge_count


@dataclass(frozen=True)
class _CirculationRun:
    pairing: RemovablePairing
    cost: int
    root_back_arcs: int


def _circulation_pairing(h: Graph, x: Sequence[Fraction] | None) -> _CirculationRun:
    """DFS tree, circulation network, optimal circulation and its removable pairing"""
    tree = dfs_tree_max_x(h, x, 0)
    net = build_network(h, tree)
    circ = min_cost_circulation(net)
    circulation_cost_audit(net, circ)
    rp = extract_pairing(net, circ)
    rp.validate()
    root_agg = aggregator_node(vertex_node(tree.root))
    root_arcs = sum(1 for i in net.arcs_into(root_agg, ArcKind.BACK) if circ.flow[i] > 0)
    return _CirculationRun(rp, circ.cost, root_arcs)


def _match(rp: RemovablePairing, path_edge: int | None = None, dist: int | None = None):
    exp = cubic_expand(rp)
    weights = assign_weights(exp, rp, path_edge, dist)
    m = min_weight_perfect_matching(exp.cubic_graph, weights)
    require(
        third_bound_check(exp.cubic_graph, weights, m),
        f"matching weight {m.weight} exceeds a third of {sum(weights)}",
    )
    return exp, m


def _pairing_tour(h: Graph, x: Sequence[Fraction] | None) -> tuple[Multigraph, _CirculationRun]:
    run = _circulation_pairing(h, x)
    rp = run.pairing
    exp, m = _match(rp)
    tour = assemble_tour(rp, exp, m)
    require(
        tour.edge_count <= bounds.pairing_tour_bound(rp.base_graph.edge_count, len(rp.removable)),
        "tour exceeds 4/3|E| - 2/3|R|",
    )
    require(
        tour.edge_count <= bounds.circulation_tour_bound(h.vertex_count, run.cost),
        "tour exceeds 4n/3 + 2c/3 - 2/3",
    )
    return tour, run


def _check_subcubic_cost(run: _CirculationRun) -> None:
    require(run.cost <= 1, f"subcubic circulation cost {run.cost} > 1")
    if run.cost == 1:
        require(run.root_back_arcs >= 2, "cost-1 circulation with fewer than two root back-arcs")


def _doubled_edge(g: Graph) -> TourSolution:
    u, v = g.edges[0]
    mg = Multigraph(2, (((u, v), 2),))
    cert = TourCertificate(
        olp=solve_held_karp(g).value,
        chosen="doubled-edge",
        algorithm_edges=2,
        christofides_edges=2,
        circulation_cost=0,
        subcubic_bound=Fraction(2),
    )
    return TourSolution(mg, ((u, v), (v, u)), cert)


def solve_block_tour(g: Graph) -> TourSolution:
    """
    Best of the circulation-based removable-pairing tour and Christofides on
    a 2-vertex-connected block
    """
    n = g.vertex_count
    if n == 2 and g.edge_count == 1:
        return _doubled_edge(g)
    if not is_two_vertex_connected(g):
        raise NotTwoConnectedError("block solver needs a 2-vertex-connected graph")

    lp = solve_held_karp(g)
    olp = lp.value
    cost_bound = subcubic = None
    if g.max_degree <= 3:
        tour, run = _pairing_tour(g, None)
        _check_subcubic_cost(run)
        subcubic = Fraction(bounds.subcubic_tour_bound(n))
        require(tour.edge_count <= subcubic, f"subcubic tour has {tour.edge_count} > {subcubic} edges")
        cost = run.cost
        pairing_bound = bounds.pairing_tour_bound(run.pairing.base_graph.edge_count, len(run.pairing.removable))
        label = "pairing"
    else:
        support = support_graph(g, lp)
        if is_two_vertex_connected(support):
            x = [lp.x[e] for e in lp.support]
            tour, run = _pairing_tour(support, x)
            cost_bound = bounds.circulation_cost_bound(n, olp)
            require(run.cost <= cost_bound, f"circulation cost {run.cost} exceeds {cost_bound}")
            cost = run.cost
            pairing_bound = bounds.pairing_tour_bound(run.pairing.base_graph.edge_count, len(run.pairing.removable))
            label = "pairing"
        else:
            logger.warning(f"LP support of a {n}-vertex block is not 2-vertex-connected, solving its blocks")
            nested = tsp_tour(support)
            tour = nested.multigraph
            cost = nested.certificate.circulation_cost
            pairing_bound = None
            label = "support-blocks"

    chris = christofides(g, olp)
    candidates = [(label, tour), ("christofides", chris.multigraph)]
    chosen, best = min(candidates, key=lambda c: c[1].edge_count)
    require(best.edge_count <= bounds.tour_guarantee(olp), f"{best.edge_count} edges exceed 1.4609 * {olp}")
    analytic = min(bounds.algorithm_bounds_at(n, olp))
    require(analytic <= bounds.tour_guarantee(olp), f"worst-case bound {analytic} exceeds 1.4609 * {olp}")

    cert = TourCertificate(
        olp=olp,
        chosen=chosen,
        algorithm_edges=tour.edge_count,
        christofides_edges=chris.edge_count,
        circulation_cost=cost,
        circulation_bound=None if cost is None else bounds.circulation_tour_bound(n, cost),
        pairing_bound=pairing_bound,
        cost_bound=cost_bound,
        christofides_bound=bounds.christofides_bound(n, olp),
        subcubic_bound=subcubic,
        analytic_bound=analytic,
    )
    logger.info(f"block n={n} m={g.edge_count}: {chosen} with {best.edge_count} edges, olp={olp}")
    return TourSolution(best, euler_traversal(best, 0, 0), cert)


def christofides(g: Graph, olp: Fraction | None = None) -> TourSolution:
    """BFS tree from vertex 0 plus a min-weight matching of its odd vertices in the metric closure"""
    n = g.vertex_count
    if n == 0 or not g.is_connected():
        raise DisconnectedGraphError("christofides needs a connected graph")
    graph = g.to_networkx()
    counts: Counter = Counter(normalize(u, v) for u, v in nx.bfs_edges(graph, 0))
    degree: Counter = Counter(v for edge in counts for v in edge)
    odd = sorted(v for v in range(n) if degree[v] % 2)

    if odd:
        closure = Graph(
            len(odd), tuple((i, j) for i in range(len(odd)) for j in range(i + 1, len(odd)))
        )
        lengths = {u: nx.single_source_shortest_path_length(graph, u) for u in odd}
        weights = [lengths[odd[i]][odd[j]] for i, j in closure.edges]
        matching = min_weight_perfect_matching(closure, weights)
        for eid in sorted(matching.edges):
            i, j = closure.edges[eid]
            path = nx.shortest_path(graph, odd[i], odd[j])
            counts.update(normalize(a, b) for a, b in zip(path, path[1:]))

    mg = Multigraph.from_counts(n, counts)
    bound = None
    if olp is not None:
        bound = bounds.christofides_bound(n, olp)
        require(mg.edge_count <= bound, f"christofides tour {mg.edge_count} exceeds n-1+OLP/2 = {bound}")
    cert = TourCertificate(
        olp=olp, chosen="christofides", christofides_edges=mg.edge_count, christofides_bound=bound
    )
    return TourSolution(mg, euler_traversal(mg, 0, 0), cert)


def _sum_field(parts: Sequence, name: str):
    values = [getattr(p, name) for p in parts]
    return None if any(v is None for v in values) else sum(values)


def tsp_tour(g: Graph) -> TourSolution:
    """Solve every block and glue the block tours at the cut vertices"""
    n = g.vertex_count
    if n == 0 or not g.is_connected():
        raise DisconnectedGraphError("graph-TSP needs a connected graph")
    if n == 1:
        return TourSolution(Multigraph(1), (), TourCertificate(olp=Fraction(0), chosen="trivial", blocks=0))
    if is_two_vertex_connected(g):
        return solve_block_tour(g)

    decomposition = blocks(g)
    total = Multigraph(n)
    parts = []
    all_subcubic = True
    for vertices in decomposition.blocks:
        sub, labels = g.induced(vertices)
        all_subcubic = all_subcubic and sub.max_degree <= 3
        sol = solve_block_tour(sub)
        total = total + sol.multigraph.relabeled(labels, n)
        parts.append(sol.certificate)

    k = len(parts)
    olp = sum((p.olp for p in parts), Fraction(0))
    require(total.edge_count <= bounds.tour_guarantee(olp), f"{total.edge_count} edges exceed 1.4609 * {olp}")
    subcubic = None
    if all_subcubic:
        subcubic = bounds.block_subcubic_bound(n, k)
        require(total.edge_count <= subcubic, f"{k}-block subcubic tour exceeds {subcubic}")

    cert = TourCertificate(
        olp=olp,
        chosen="blocks",
        blocks=k,
        algorithm_edges=_sum_field(parts, "algorithm_edges"),
        christofides_edges=_sum_field(parts, "christofides_edges"),
        circulation_cost=_sum_field(parts, "circulation_cost"),
        subcubic_bound=subcubic,
    )
    logger.info(f"glued {k} blocks: {total.edge_count} edges, olp sum {olp}")
    return TourSolution(total, euler_traversal(total, 0, 0), cert)


def doubled_tree_path(g: Graph, s: int, t: int) -> PathSolution:
    """BFS tree from s with every edge doubled except those on the tree path to t"""
    n = g.vertex_count
    check_vertex(n, s, "s")
    check_vertex(n, t, "t")
    if not g.is_connected():
        raise DisconnectedGraphError("path baseline needs a connected graph")
    parent = dict(nx.bfs_predecessors(g.to_networkx(), s))
    on_path = set()
    v = t
    while v != s:
        on_path.add(normalize(parent[v], v))
        v = parent[v]

    counts = {normalize(u, p): 1 if normalize(u, p) in on_path else 2 for u, p in parent.items()}
    mg = Multigraph.from_counts(n, counts)
    bound = bounds.path_baseline_bound(n, len(on_path))
    require(mg.edge_count == bound, "doubled tree edge count differs from 2(n-1) - dist_T")
    cert = PathCertificate(
        lower_bound=None,
        chosen="baseline",
        dist=len(on_path),
        baseline_edges=mg.edge_count,
        baseline_bound=bound,
    )
    return PathSolution(mg, euler_traversal(mg, s, t), s, t, cert)


def _pairing_path(
    rp: RemovablePairing, s: int, t: int, dist: int, shortest: Sequence[Edge]
) -> Multigraph:
    exp, m = _match(rp, rp.path_edge, dist)
    return assemble_path(rp, exp, m, s, t, shortest)


def _tour_as_path(tour: TourSolution, s: int) -> PathSolution:
    cert = tour.certificate
    path_cert = PathCertificate(
        lower_bound=cert.olp,
        chosen=cert.chosen,
        dist=0,
        blocks=cert.blocks,
        olp_path=cert.olp,
        algorithm_edges=cert.algorithm_edges,
        circulation_cost=cert.circulation_cost,
        subcubic_bound=cert.subcubic_bound,
    )
    return PathSolution(tour.multigraph, euler_traversal(tour.multigraph, s, s), s, s, path_cert)


def solve_block_path(g: Graph, s: int, t: int, *, exact_below: int | None = None) -> PathSolution:
    """
    Best of the removable-pairing path on G + {s, t}, the doubled-tree
    baseline and, on small blocks, the exact optimum
    """
    n = g.vertex_count
    check_vertex(n, s, "s")
    check_vertex(n, t, "t")
    if s == t:
        return _tour_as_path(solve_block_tour(g), s)
    if not is_two_vertex_connected(g):
        raise NotTwoConnectedError("block path solver needs a 2-vertex-connected graph")
    exact_below = settings.EXACT_PATH_BELOW if exact_below is None else exact_below

    dist, shortest = bfs_distance(g, s, t)
    lp_path = solve_held_karp(g, s, t)
    augmented, _, _ = g.with_edge(s, t)
    olp_aug = solve_held_karp(augmented).value
    require(olp_aug <= lp_path.value + 1, f"OLP(G') = {olp_aug} exceeds OLP(G,s,t) + 1")

    if n == 2:
        mg = Multigraph(2, ((normalize(s, t), 1),))
        cert = PathCertificate(
            lower_bound=olp_aug - 1,
            chosen="single-edge",
            dist=1,
            olp_path=lp_path.value,
            olp_augmented=olp_aug,
            baseline_edges=1,
        )
        return PathSolution(mg, ((s, t),), s, t, cert)

    cost_bound = main_bound = guarantee = subcubic = None
    if g.max_degree <= 3:
        run = _circulation_pairing(g, None)
        _check_subcubic_cost(run)
        rp = run.pairing.with_edge(s, t)
        main = _pairing_path(rp, s, t, dist, shortest)
        require(3 * main.edge_count <= 4 * n - 2 + dist, "subcubic path exceeds 4n/3 - 2/3 + dist/3")
        subcubic = bounds.subcubic_path_bound(n, dist)
    else:
        lp_aug = solve_held_karp(augmented)
        support = support_graph(augmented, lp_aug)
        applies = is_two_vertex_connected(support)
        if applies:
            base, x = support, [lp_aug.x[e] for e in lp_aug.support]
        else:
            logger.warning(f"LP support of G' (n={n}) is not 2-vertex-connected, using G' itself")
            base, x = augmented, lp_aug.x
        run = _circulation_pairing(base, x)
        rp = run.pairing.with_edge(s, t)
        main = _pairing_path(rp, s, t, dist, shortest)
        if applies:
            cost_bound = bounds.circulation_cost_bound(n, olp_aug)
            require(run.cost <= cost_bound, f"circulation cost {run.cost} exceeds {cost_bound}")
            main_bound = bounds.path_main_bound(n, dist, olp_aug)
            require(main.edge_count <= main_bound, f"path of {main.edge_count} edges exceeds {main_bound}")
            guarantee = bounds.path_guarantee(olp_aug)

    baseline = doubled_tree_path(g, s, t)
    candidates = [("pairing", main), ("baseline", baseline.multigraph)]
    exact = None
    if n < exact_below and n <= settings.ORACLE_HARD_CAP:
        exact = oracle_walk(g, s, t, cutoff=n)
        candidates.append(("exact", exact))
    chosen, best = min(candidates, key=lambda c: c[1].edge_count)

    if guarantee is not None:
        require(best.edge_count <= guarantee, f"{best.edge_count} edges exceed the path guarantee {guarantee}")
    if subcubic is not None:
        require(best.edge_count <= subcubic, f"{best.edge_count} edges exceed the subcubic path bound {subcubic}")

    removable = len(rp.removable - {rp.path_edge})
    cert = PathCertificate(
        lower_bound=olp_aug - 1,
        chosen=chosen,
        dist=dist,
        olp_path=lp_path.value,
        olp_augmented=olp_aug,
        d=Fraction(dist, n),
        zeta=(olp_aug - 1) / n,
        algorithm_edges=main.edge_count,
        baseline_edges=baseline.edge_count,
        exact_edges=None if exact is None else exact.edge_count,
        circulation_cost=run.cost,
        pairing_bound=Fraction(4 * (rp.base_graph.edge_count - 1) - 2 * removable + dist, 3),
        cost_bound=cost_bound,
        main_bound=main_bound,
        baseline_bound=baseline.certificate.baseline_bound,
        subcubic_bound=subcubic,
        guarantee_bound=guarantee,
    )
    logger.info(f"path block n={n} s={s} t={t}: {chosen} with {best.edge_count} edges")
    return PathSolution(best, euler_traversal(best, s, t), s, t, cert)


def tsp_path(g: Graph, s: int, t: int) -> PathSolution:
    """
    Split at the smallest cut vertex v and recurse on each component C plus v,
    with endpoints s (or t) when inside C and v otherwise
    """
    n = g.vertex_count
    check_vertex(n, s, "s")
    check_vertex(n, t, "t")
    if not g.is_connected():
        raise DisconnectedGraphError("graph-TSPP needs a connected graph")
    if s == t:
        return _tour_as_path(tsp_tour(g), s)
    if is_two_vertex_connected(g):
        return solve_block_path(g, s, t)

    cut = min(blocks(g).cut_vertices)
    graph = g.to_networkx()
    graph.remove_node(cut)
    total = Multigraph(n)
    lower = Fraction(0)
    parts = 0
    for component in sorted(nx.connected_components(graph), key=min):
        sub, labels = g.induced(component | {cut})
        local = {v: i for i, v in enumerate(labels)}
        s_i = s if s in component else cut
        t_i = t if t in component else cut
        sol = tsp_path(sub, local[s_i], local[t_i])
        total = total + sol.multigraph.relabeled(labels, n)
        lower += sol.certificate.lower_bound
        parts += sol.certificate.blocks

    dist, _ = bfs_distance(g, s, t)
    cert = PathCertificate(lower_bound=lower, chosen="blocks", dist=dist, blocks=parts)
    return PathSolution(total, euler_traversal(total, s, t), s, t, cert)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _format_value(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, Fraction):
        return format_fraction(value)
    return str(value)


def certificate_lines(cert: TourCertificate | PathCertificate) -> list[str]:
    return [f"{f.name}={_format_value(getattr(cert, f.name))}" for f in fields(cert)]


def serialize_tour(sol: TourSolution) -> str:
    lines = [f"tour {sol.edge_count}"]
    lines += [f"{u} {v}" for u, v in sol.walk]
    lines.append("")
    lines += certificate_lines(sol.certificate)
    return "\n".join(lines) + "\n"


def serialize_path(sol: PathSolution) -> str:
    lines = [f"path {sol.s} {sol.t} {sol.edge_count}"]
    lines += [f"{u} {v}" for u, v in sol.walk]
    lines.append("")
    lines += certificate_lines(sol.certificate)
    return "\n".join(lines) + "\n"


def certificate_dict(cert: TourCertificate | PathCertificate) -> dict[str, str | None]:
    """Certificate fields with rationals as 'p/q' and absent values as None"""
    return {
        f.name: None if getattr(cert, f.name) is None else _format_value(getattr(cert, f.name))
        for f in fields(cert)
    }
