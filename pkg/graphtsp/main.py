"""
FastAPI application serving the solvers and the benchmark stream
"""
import logging
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from graphtsp.api.routes import router
from graphtsp.config import settings


logging.basicConfig(
    level=settings.LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

VERSION = "1.0.0"
SERVICE_NAME = "Graph-TSP Approximation Server"


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"{SERVICE_NAME} {VERSION} listening on {settings.HOST}:{settings.PORT}")
    logger.info(
        f"oracle cutoff {settings.ORACLE_CUTOFF} (hard cap {settings.ORACLE_HARD_CAP}), "
        f"exact path blocks below n={settings.EXACT_PATH_BELOW}, LP rounds {settings.LP_MAX_ROUNDS}"
    )
    yield
    logger.info(f"{SERVICE_NAME} stopped")


app = FastAPI(
    title=SERVICE_NAME,
    description="Certified graph-TSP tours and s-t paths, exact Held-Karp bounds and benchmark streaming",
    version=VERSION,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(router, prefix="/api", tags=["graph-TSP"])


@app.get("/health")
async def health_check():
    return {"status": "healthy", "service": SERVICE_NAME, "version": VERSION}


def serve(host: Optional[str] = None, port: Optional[int] = None) -> None:
    """Run the app under uvicorn with the configured log level and reload flag"""
    import uvicorn

    uvicorn.run(
        "graphtsp.main:app",
        host=host or settings.HOST,
        port=port or settings.PORT,
        reload=settings.RELOAD,
        log_level=settings.LOG_LEVEL.lower(),
    )


if __name__ == "__main__":
    serve()
