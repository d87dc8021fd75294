from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

SUITESPARSE_PATTERN = r"^[\w.\-]+/[\w.\-]+$"


class InitMethod(str, Enum):
    """Colocación inicial"""
    RANDOM = "random"
    SA = "sa"
    CN = "cn"


class SolverKind(str, Enum):
    """Solver final"""
    FR = "fr"
    LBFGS = "lbfgs"


class GraphSource(BaseModel):
    """Origen del grafo: exactamente uno de archivo, generador o SuiteSparse"""
    input_file: Optional[Path] = None
    generator: Optional[str] = Field(None, min_length=1)
    suitesparse: Optional[str] = Field(None, pattern=SUITESPARSE_PATTERN)
    unweighted: bool = False

    @model_validator(mode="after")
    def check_single_source(self):
        given = [v for v in (self.input_file, self.generator, self.suitesparse) if v is not None]
        if len(given) != 1:
            raise ValueError("Se necesita exactamente un origen: archivo, generador o SuiteSparse")
        return self

    @property
    def label(self) -> str:
        if self.generator is not None:
            return self.generator
        if self.suitesparse is not None:
            return self.suitesparse
        return self.input_file.stem


class MethodOptions(BaseModel):
    """Parámetros comunes a todas las ejecuciones"""
    iters: Optional[int] = Field(None, ge=1)
    k: Optional[float] = Field(None, gt=0)
    eps_r: Optional[float] = Field(None, ge=0, lt=1)
    cn_t0: Optional[float] = Field(None, gt=0)
    cn_iters: Optional[int] = Field(None, ge=0)
    fr_t0: Optional[float] = Field(None, gt=0)
    tol: Optional[float] = Field(None, ge=0)
    trace_every: int = Field(1, ge=1)
    timing: bool = True


class RunSpec(BaseModel):
    """Una ejecución de layout: origen, método, semillas y salidas"""
    source: GraphSource
    init: InitMethod = InitMethod.CN
    solver: SolverKind = SolverKind.LBFGS
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    options: MethodOptions = Field(default_factory=MethodOptions)
    svg: Optional[Path] = None
    trace: Optional[Path] = None
    out: Optional[Path] = None


class BenchSpec(BaseModel):
    """Matriz de benchmark: grafos × inicializaciones × solvers × semillas"""
    sources: List[GraphSource] = Field(..., min_length=1)
    inits: List[InitMethod] = Field(default_factory=lambda: [InitMethod.RANDOM, InitMethod.CN], min_length=1)
    solvers: List[SolverKind] = Field(default_factory=lambda: [SolverKind.FR, SolverKind.LBFGS], min_length=1)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    options: MethodOptions = Field(default_factory=MethodOptions)
    workers: int = Field(1, ge=1)


class BenchRow(BaseModel):
    """Fila del resumen: una por (grafo, inicialización, solver)"""
    graph: str
    init: InitMethod
    solver: SolverKind
    runs: int
    mean_f: Optional[float] = None
    min_f: Optional[float] = None
    max_f: Optional[float] = None
    mean_elapsed_ms: Optional[float] = None
    # f_CN - f_random y f_CN - f_SA, medias por semilla emparejada
    diff_vs_random: Optional[float] = None
    diff_vs_sa: Optional[float] = None
    separation: Optional[float] = None
    status: str = "ok"
    error: Optional[str] = None


class TraceRecordResponse(BaseModel):
    iteration: int
    energy: float
    elapsed_ms: float


class LayoutRequest(BaseModel):
    """Esquema para solicitar un layout por HTTP"""
    generator: Optional[str] = Field(None, min_length=1)
    edge_list: Optional[str] = Field(None, min_length=1)
    suitesparse: Optional[str] = Field(None, pattern=SUITESPARSE_PATTERN)
    unweighted: bool = False
    init: InitMethod = InitMethod.CN
    solver: SolverKind = SolverKind.LBFGS
    seed: int = 0
    options: MethodOptions = Field(default_factory=MethodOptions)

    @model_validator(mode="after")
    def check_single_source(self):
        given = [v for v in (self.generator, self.edge_list, self.suitesparse) if v is not None]
        if len(given) != 1:
            raise ValueError("Se necesita exactamente un origen: generador, lista de aristas o SuiteSparse")
        return self


class LayoutResponse(BaseModel):
    """Esquema de respuesta de layout"""
    n: int
    num_edges: int
    positions: List[List[float]]
    termination: str
    iterations: int
    final_energy: float
    trace: List[TraceRecordResponse]


class BenchRequest(BaseModel):
    """Esquema para solicitar un benchmark por HTTP (solo generadores)"""
    generators: List[str] = Field(..., min_length=1)
    inits: List[InitMethod] = Field(default_factory=lambda: [InitMethod.RANDOM, InitMethod.CN], min_length=1)
    solvers: List[SolverKind] = Field(default_factory=lambda: [SolverKind.FR, SolverKind.LBFGS], min_length=1)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    unweighted: bool = False
    options: MethodOptions = Field(default_factory=MethodOptions)


class BenchResponse(BaseModel):
    rows: List[BenchRow]


class GraphSummary(BaseModel):
    """Resumen de un grafo: n, |E| y densidad 2|E|/(n(n-1))"""
    name: str
    n: int
    num_edges: int
    sparsity: float
