from pydantic_settings import BaseSettings
from functools import lru_cache
from typing import Optional


class Settings(BaseSettings):
    # App Config
    APP_NAME: str = "Hua-Bellman Toolkit"
    VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Combinatorial kernels
    PERMANENT_CAP: int = 10
    PERMUTATION_CHUNK: int = 40320

    # Tolerances (relative to 1 + magnitude of the data unless noted)
    CONTRACTION_MARGIN: float = 1e-9
    HERMITIAN_TOL: float = 1e-12
    EIGEN_RESIDUAL_TOL: float = 1e-10
    PD_RELATIVE_TOL: float = 1e-10
    SEARCH_TOL: float = 1e-8
    DISTANCE_CLAMP_TOL: float = 1e-12
    RANK_TOL: float = 1e-10
    MAJORIZATION_SLACK: float = 1e-12
    MOBIUS_RESIDUAL_TOL: float = 1e-10

    # Workers for the counterexample search; None means all available cores
    DEFAULT_WORKERS: Optional[int] = None

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


@lru_cache()
def get_settings():
    return Settings()
