from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuración del motor de layout"""

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=False, extra="ignore")

    # SuiteSparse
    CACHE_DIR: Path = Field(default=Path.home() / ".cache" / "fr-layout")
    SUITESPARSE_URL_TEMPLATE: str = Field(default="https://sparse.tamu.edu/MM/{group}/{name}.tar.gz")
    SUITESPARSE_MEMBER_TEMPLATE: str = Field(default="{name}/{name}.mtx")
    FETCH_TIMEOUT_SECONDS: float = Field(default=60.0, gt=0)
    FETCH_RETRIES: int = Field(default=3, ge=0)

    # Modelo de fuerzas
    EPS_R: float = Field(default=1e-2, ge=0)
    DISTANCE_CLAMP: float = Field(default=1e-9, gt=0)

    # Colocación inicial
    CN_T0: float = Field(default=1.5, gt=0)
    CN_ITER_CAP: int = Field(default=50_000_000, ge=1)
    SA_FINAL_RATIO: float = Field(default=1e-3, gt=0, lt=1)

    # Solvers
    LBFGS_MEMORY: int = Field(default=10, ge=1)
    TRACE_EVERY: int = Field(default=1, ge=1)

    # Bench
    BENCH_WORKERS: int = Field(default=1, ge=1)

    # Logging
    LOG_LEVEL: str = Field(default="INFO")

    # API
    API_HOST: str = Field(default="localhost")
    API_PORT: int = Field(default=8000)
    DEBUG: bool = Field(default=False)


# Instancia global de configuración
settings = Settings()
