from .graph import Graph, ComponentPartition
from .lattice import HexCoord, Occupancy, CirclePerm
from .layout import Layout, as_layout
from .trace import Trace, TraceRecord, Termination, RunResult

__all__ = [
    "Graph", "ComponentPartition",
    "HexCoord", "Occupancy", "CirclePerm",
    "Layout", "as_layout",
    "Trace", "TraceRecord", "Termination", "RunResult",
]
