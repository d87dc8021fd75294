from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray


class Termination(str, Enum):
    """Motivo de parada de un solver"""

    MAX_ITER = "max_iter"
    CONVERGED = "converged"
    GRADIENT_TOL = "gradient_tol"
    LINE_SEARCH_FAILED = "line_search_failed"


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    energy: float
    elapsed_ms: float


@dataclass
class Trace:
    """Registro de energía por iteración de una ejecución"""

    records: list[TraceRecord] = field(default_factory=list)
    layout: NDArray[np.float64] | None = None
    termination: Termination = Termination.MAX_ITER
    iterations: int = 0

    def append(self, iteration: int, energy: float, elapsed_ms: float) -> None:
        if self.records and iteration <= self.records[-1].iteration:
            raise ValueError("Las iteraciones del trace deben ser estrictamente crecientes")
        self.records.append(TraceRecord(iteration, float(energy), float(elapsed_ms)))

    @property
    def energies(self) -> list[float]:
        return [rec.energy for rec in self.records]

    @property
    def initial_energy(self) -> float:
        return self.records[0].energy

    @property
    def final_energy(self) -> float:
        return self.records[-1].energy


@dataclass
class RunResult:
    """Una ejecución (inicialización + solver) para una semilla"""

    seed: int
    init: str
    solver: str
    initial_layout: NDArray[np.float64]
    trace: Trace
    init_ms: float = 0.0
    solve_ms: float = 0.0

    @property
    def layout(self) -> NDArray[np.float64]:
        return self.trace.layout

    @property
    def final_energy(self) -> float:
        return self.trace.final_energy
