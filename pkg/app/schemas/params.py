import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings


class ForceParams(BaseModel):
    """Parámetros del modelo de fuerzas FR"""

    model_config = ConfigDict(frozen=True)

    k: float = Field(..., gt=0)
    # Guarda de repulsión en unidades de k: se usa -k² log(d + eps_r·k)
    eps_r: float = Field(default_factory=lambda: settings.EPS_R, ge=0, lt=1)

    @classmethod
    def for_graph(cls, n: int, k: Optional[float] = None, eps_r: Optional[float] = None) -> "ForceParams":
        """k = 1/√n salvo que se indique otro valor"""
        data = {"k": k if k is not None else 1.0 / math.sqrt(n)}
        if eps_r is not None:
            data["eps_r"] = eps_r
        return cls(**data)

    @property
    def eps(self) -> float:
        """Guarda de repulsión en unidades de longitud"""
        return self.eps_r * self.k


class GravityConfig(BaseModel):
    """Término de gravedad para grafos no conexos"""

    model_config = ConfigDict(frozen=True)

    center: tuple[float, float] = (0.5, 0.5)
    # None: activo solo si el grafo tiene más de una componente
    enabled: Optional[bool] = None


class CnParams(BaseModel):
    """Parámetros de la colocación inicial por Newton coordenado"""

    model_config = ConfigDict(frozen=True)

    t0: float = Field(default_factory=lambda: settings.CN_T0, gt=0)
    n_iter: Optional[int] = Field(None, ge=0)
    seed: int = 0
    hessian_guard: float = Field(1e-8, ge=0)
    guard_threshold: float = Field(1e-10, ge=0)


class SaParams(BaseModel):
    """Parámetros del recocido simulado sobre el círculo"""

    model_config = ConfigDict(frozen=True)

    n_iter: Optional[int] = Field(None, ge=1)
    seed: int = 0
    t_start: float = Field(math.pi, gt=0)
    final_ratio: float = Field(default_factory=lambda: settings.SA_FINAL_RATIO, gt=0, lt=1)


class SolverConfig(BaseModel):
    """Configuración de los solvers FR y L-BFGS"""

    model_config = ConfigDict(frozen=True)

    n_iter: int = Field(50, ge=1)
    # Temperatura inicial de FR; None = 0.1 × lado mayor de la caja de X0
    t0: Optional[float] = Field(None, gt=0)
    memory: int = Field(default_factory=lambda: settings.LBFGS_MEMORY, ge=1)
    # None = 1e-6·k
    tol: Optional[float] = Field(None, ge=0)
    trace_every: int = Field(default_factory=lambda: settings.TRACE_EVERY, ge=1)
    timing: bool = True


def default_cn_iterations(n: int, num_edges: int) -> int:
    """⌈2|V|³/|E|⌉ acotado por CN_ITER_CAP"""
    return min(-(-2 * n**3 // max(num_edges, 1)), settings.CN_ITER_CAP)
