"""
Configuration settings for the graph-TSP toolkit
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings"""

    # Server settings
    HOST: str = "0.0.0.0"
    PORT: int = 8010
    LOG_LEVEL: str = "INFO"
    RELOAD: bool = False

    # Exact oracle
    ORACLE_CUTOFF: int = 12
    ORACLE_HARD_CAP: int = 16

    # Path blocks below this size also get the exact answer as a candidate (0 disables)
    EXACT_PATH_BELOW: int = 12

    # Held-Karp cutting planes
    LP_MAX_ROUNDS: int = 2000
    CHECK_SUPPORT_OPTIMUM: bool = True

    # Removable pairing deletion check
    PAIRING_EXHAUSTIVE_PAIRS: int = 10
    PAIRING_SAMPLES: int = 1000

    # Benchmark runner
    BENCH_WORKERS: int = 1

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
