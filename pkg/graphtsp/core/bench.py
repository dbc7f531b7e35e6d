"""
Benchmark runner: solves a corpus of instances and reports edge counts,
LP values and exact optima as CSV rows
"""
import asyncio
import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from fractions import Fraction
from typing import Any, AsyncGenerator, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, Field

from graphtsp.config import settings
from graphtsp.core.errors import require
from graphtsp.core.generators import InstanceSpec
from graphtsp.core.oracle import oracle_opt_path, oracle_opt_tour
from graphtsp.core.pipeline import tsp_path, tsp_tour


logger = logging.getLogger(__name__)

RATIO_PLACES = Decimal("0.000001")


class BenchRow(BaseModel):
    """One CSV row; for path instances christofides_edges holds the doubled-tree baseline"""
    instance: str = Field(..., description="Instance name, e.g. gap_tour(3)")
    family: str
    n: int = 0
    m: int = 0
    maxdeg: int = 0
    olp_num: Optional[int] = None
    olp_den: Optional[int] = None
    opt: Optional[int] = Field(None, description="Exact optimum when n is within the oracle cutoff")
    ms_edges: Optional[int] = Field(None, description="Removable-pairing algorithm edge count")
    christofides_edges: Optional[int] = None
    best_edges: Optional[int] = None
    circ_cost: Optional[int] = None
    ratio_best_over_olp: Optional[str] = None
    chosen: Optional[str] = None
    err: str = ""
    runtime_ms: int = 0


CSV_HEADER = list(BenchRow.model_fields)


def format_ratio(edges: int, olp: Fraction) -> str:
    """edges / olp computed exactly, rendered with six decimals"""
    ratio = Fraction(edges) / olp
    return str((Decimal(ratio.numerator) / Decimal(ratio.denominator)).quantize(RATIO_PLACES))


def run_instance(spec: InstanceSpec, oracle_cutoff: int | None = None) -> BenchRow:
    """Solve one instance; any failure lands in the err column"""
    cutoff = settings.ORACLE_CUTOFF if oracle_cutoff is None else oracle_cutoff
    started = time.perf_counter()
    row = BenchRow(instance=spec.name, family=spec.family)
    try:
        instance = spec.build()
        g = instance.graph
        row.n, row.m, row.maxdeg = g.vertex_count, g.edge_count, g.max_degree

        if instance.s is not None:
            sol = tsp_path(g, instance.s, instance.t)
            cert = sol.certificate
            olp = cert.olp_path if cert.olp_path is not None else cert.lower_bound
            lower = cert.lower_bound
            row.ms_edges = cert.algorithm_edges
            row.christofides_edges = cert.baseline_edges
        else:
            sol = tsp_tour(g)
            cert = sol.certificate
            olp = lower = cert.olp
            row.ms_edges = cert.algorithm_edges
            row.christofides_edges = cert.christofides_edges

        row.best_edges = sol.edge_count
        row.circ_cost = cert.circulation_cost
        row.chosen = cert.chosen
        row.olp_num, row.olp_den = olp.numerator, olp.denominator
        if olp > 0:
            row.ratio_best_over_olp = format_ratio(sol.edge_count, olp)

        if g.vertex_count <= cutoff:
            if instance.s is not None:
                row.opt = oracle_opt_path(g, instance.s, instance.t, cutoff=cutoff)
            else:
                row.opt = oracle_opt_tour(g, cutoff=cutoff)
            require(lower <= row.opt, f"LP bound {lower} exceeds the optimum {row.opt}")
            require(row.opt <= sol.edge_count, f"optimum {row.opt} exceeds the solution {sol.edge_count}")
    except Exception as e:
        logger.error(f"{spec.name} failed: {e}", exc_info=True)
        row.err = f"{type(e).__name__}: {e}"
    row.runtime_ms = round((time.perf_counter() - started) * 1000)
    logger.info(f"{row.instance}: best={row.best_edges} olp={row.olp_num}/{row.olp_den} opt={row.opt}")
    return row


def write_rows(rows: Sequence[BenchRow], out: TextIO, header: bool = True) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_HEADER, lineterminator="\n")
    if header:
        writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.model_dump().items()})


def bench(
    specs: Sequence[InstanceSpec],
    out: TextIO,
    workers: int | None = None,
    oracle_cutoff: int | None = None,
) -> list[BenchRow]:
    """Run every spec and write the CSV in spec order"""
    workers = settings.BENCH_WORKERS if workers is None else workers
    cutoffs = [oracle_cutoff] * len(specs)
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_instance, specs, cutoffs))
    else:
        rows = [run_instance(spec, cutoff) for spec, cutoff in zip(specs, cutoffs)]
    write_rows(rows, out)
    return rows


class BenchEngine:
    """Streams bench rows one instance at a time"""

    def __init__(self, oracle_cutoff: Optional[int] = None):
        self.oracle_cutoff = oracle_cutoff

    async def run_stream(self, specs: Sequence[InstanceSpec]) -> AsyncGenerator[Tuple[str, Any], None]:
        """
        Yields:
            ("row", BenchRow) per instance in spec order, then ("complete", {"rows": k});
            ("error", {"message": ...}) ends the stream early
        """
        loop = asyncio.get_running_loop()
        count = 0
        for spec in specs:
            try:
                row = await loop.run_in_executor(None, run_instance, spec, self.oracle_cutoff)
            except Exception as e:
                logger.error(f"bench stream failed on {spec.name}: {e}")
                yield ("error", {"message": str(e)})
                return
            count += 1
            yield ("row", row)
        yield ("complete", {"rows": count})
