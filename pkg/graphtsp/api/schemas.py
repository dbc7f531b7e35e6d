"""
Pydantic schemas for API requests and responses
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from graphtsp.core.generators import InstanceSpec


EXAMPLE_GRAPH = "4 5\n0 1\n1 2\n2 3\n0 3\n0 2\n"


class GraphRequest(BaseModel):
    """Graph in the 'n m' + edge-lines text format"""
    graph: str = Field(..., description="Graph file contents", min_length=1)

    class Config:
        json_schema_extra = {"example": {"graph": EXAMPLE_GRAPH}}


class PathRequest(GraphRequest):
    s: int = Field(..., description="Start vertex", ge=0)
    t: int = Field(..., description="End vertex", ge=0)

    class Config:
        json_schema_extra = {"example": {"graph": EXAMPLE_GRAPH, "s": 1, "t": 3}}


class LpRequest(GraphRequest):
    s: Optional[int] = Field(None, description="Path-mode start vertex", ge=0)
    t: Optional[int] = Field(None, description="Path-mode end vertex", ge=0)


class OracleRequest(LpRequest):
    cutoff: Optional[int] = Field(None, description="Largest accepted vertex count", ge=1)


class SolutionResponse(BaseModel):
    """Walk as ordered vertex pairs plus the certificate, rationals as 'p/q'"""
    kind: str = Field(..., description="'tour' or 'path'")
    s: Optional[int] = None
    t: Optional[int] = None
    edge_count: int
    walk: List[List[int]]
    certificate: Dict[str, Optional[str]]


class LpResponse(BaseModel):
    olp: str = Field(..., description="Exact LP optimum as 'p/q'")
    support: List[List[int]] = Field(..., description="Support edges as [u, v]")
    x: List[str] = Field(..., description="x value of each support edge as 'p/q'")
    cuts: int = Field(..., description="Number of active cut constraints")
    rounds: int


class OracleResponse(BaseModel):
    optimum: int


class BenchRequest(BaseModel):
    specs: List[InstanceSpec] = Field(default_factory=list)
    cutoff: Optional[int] = Field(None, description="Oracle cutoff", ge=1)

    class Config:
        json_schema_extra = {
            "example": {"specs": [{"family": "gap_tour", "k": 2}, {"family": "random_cubic", "n": 10, "seed": 1}]}
        }
