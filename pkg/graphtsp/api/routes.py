"""
API routes for graph-TSP solving, LP bounds, exact optima and streamed benchmarks
"""
import json
import logging

from fastapi import APIRouter, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import ValidationError
from starlette.concurrency import run_in_threadpool

from graphtsp.api.schemas import (
    BenchRequest,
    GraphRequest,
    LpRequest,
    LpResponse,
    OracleRequest,
    OracleResponse,
    PathRequest,
    SolutionResponse,
)
from graphtsp.core.bench import BenchEngine
from graphtsp.core.errors import (
    GraphParseError,
    GraphTspError,
    InstanceError,
    InvalidVertexError,
    OracleCutoffError,
)
from graphtsp.core.graph import parse_graph
from graphtsp.core.held_karp import solve_held_karp
from graphtsp.core.oracle import oracle_opt_path, oracle_opt_tour
from graphtsp.core.pipeline import certificate_dict, format_fraction, tsp_path, tsp_tour


logger = logging.getLogger(__name__)
router = APIRouter()

CLIENT_ERRORS = (GraphParseError, InstanceError, OracleCutoffError, InvalidVertexError)


async def _call(func, *args, **kwargs):
    """Run a solver off the event loop, mapping library errors to HTTP errors"""
    try:
        return await run_in_threadpool(func, *args, **kwargs)
    except CLIENT_ERRORS as e:
        raise HTTPException(status_code=422, detail=str(e))
    except GraphTspError as e:
        logger.error(f"solver error: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"{type(e).__name__}: {e}")


def _endpoints(request: LpRequest) -> tuple[int | None, int | None]:
    if (request.s is None) != (request.t is None):
        raise HTTPException(status_code=422, detail="s and t must be given together")
    return request.s, request.t


@router.post("/v1/solve", response_model=SolutionResponse)
async def solve_tour(request: GraphRequest):
    """Tour with certified edge-count bounds"""
    g = await _call(parse_graph, request.graph)
    sol = await _call(tsp_tour, g)
    logger.info(f"solve: n={g.vertex_count} m={g.edge_count} -> {sol.edge_count} edges")
    return SolutionResponse(
        kind="tour",
        edge_count=sol.edge_count,
        walk=[list(step) for step in sol.walk],
        certificate=certificate_dict(sol.certificate),
    )


@router.post("/v1/path", response_model=SolutionResponse)
async def solve_path(request: PathRequest):
    """s-t walk with certified edge-count bounds"""
    g = await _call(parse_graph, request.graph)
    sol = await _call(tsp_path, g, request.s, request.t)
    logger.info(f"path: n={g.vertex_count} s={request.s} t={request.t} -> {sol.edge_count} edges")
    return SolutionResponse(
        kind="path",
        s=sol.s,
        t=sol.t,
        edge_count=sol.edge_count,
        walk=[list(step) for step in sol.walk],
        certificate=certificate_dict(sol.certificate),
    )


@router.post("/v1/lp", response_model=LpResponse)
async def held_karp_lp(request: LpRequest):
    """Exact Held-Karp LP optimum and its support"""
    s, t = _endpoints(request)
    g = await _call(parse_graph, request.graph)
    lp = await _call(solve_held_karp, g, s, t)
    return LpResponse(
        olp=format_fraction(lp.value),
        support=[list(g.edges[e]) for e in lp.support],
        x=[format_fraction(lp.x[e]) for e in lp.support],
        cuts=len(lp.active_cuts),
        rounds=lp.rounds,
    )


@router.post("/v1/oracle", response_model=OracleResponse)
async def exact_optimum(request: OracleRequest):
    """Exact optimum by dynamic programming over the metric closure"""
    s, t = _endpoints(request)
    g = await _call(parse_graph, request.graph)
    if s is None:
        value = await _call(oracle_opt_tour, g, request.cutoff)
    else:
        value = await _call(oracle_opt_path, g, s, t, request.cutoff)
    return OracleResponse(optimum=value)


@router.websocket("/ws/bench")
async def websocket_bench_stream(websocket: WebSocket):
    """
    WebSocket endpoint streaming benchmark rows

    Protocol:
    1. Client sends JSON: {"specs": [{"family": "gap_tour", "k": 2}, ...], "cutoff": 12}
    2. Server streams one text frame per row: {"type": "row", "row": {...}}
    3. Server sends final text frame: {"type": "complete", "rows": k}
    """
    await websocket.accept()
    logger.info("WebSocket connection established")

    try:
        data = await websocket.receive_text()
        try:
            request = BenchRequest(**json.loads(data))
        except (json.JSONDecodeError, ValidationError, TypeError) as e:
            await websocket.send_text(json.dumps({"type": "error", "message": f"Invalid request: {e}"}))
            return

        logger.info(f"Streaming bench over {len(request.specs)} instances")
        engine = BenchEngine(oracle_cutoff=request.cutoff)
        async for msg_type, payload in engine.run_stream(request.specs):
            if msg_type == "row":
                await websocket.send_text(json.dumps({"type": "row", "row": payload.model_dump()}))
            elif msg_type == "complete":
                await websocket.send_text(json.dumps({"type": "complete", **payload}))
            elif msg_type == "error":
                await websocket.send_text(json.dumps({
                    "type": "error",
                    "message": payload.get("message", "Unknown error")
                }))
                break

        logger.info("Bench stream complete")

    except WebSocketDisconnect:
        logger.info("WebSocket disconnected")
    except Exception as e:
        logger.error(f"WebSocket error: {e}", exc_info=True)
        try:
            await websocket.send_text(json.dumps({"type": "error", "message": str(e)}))
        except Exception:
            pass
    finally:
        try:
            await websocket.close()
        except Exception:
            pass
