from .params import ForceParams, GravityConfig, CnParams, SaParams, SolverConfig, default_cn_iterations
from .run import (
    InitMethod, SolverKind, GraphSource, MethodOptions, RunSpec, BenchSpec, BenchRow,
    TraceRecordResponse, LayoutRequest, LayoutResponse, BenchRequest, BenchResponse, GraphSummary,
)

__all__ = [
    "ForceParams", "GravityConfig", "CnParams", "SaParams", "SolverConfig", "default_cn_iterations",
    "InitMethod", "SolverKind", "GraphSource", "MethodOptions", "RunSpec", "BenchSpec", "BenchRow",
    "TraceRecordResponse", "LayoutRequest", "LayoutResponse", "BenchRequest", "BenchResponse", "GraphSummary",
]
