"""Benchmark: una fila por (grafo, inicialización, solver) con estadísticas sobre las semillas."""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import httpx
import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import pdist

from app.core.exceptions import LayoutError
from app.models.graph import Graph
from app.models.layout import Layout
from app.schemas.run import BenchRow, BenchSpec, InitMethod, MethodOptions, SolverKind
from app.services.graph_ops import generator_groups
from app.services.pipeline import load_graph, run_single

logger = logging.getLogger(__name__)


def group_separation_ratio(X: Layout, labels: NDArray[np.int64]) -> float:
    """Distancia media entre pares de grupos distintos / distancia media dentro del grupo"""
    labels = np.asarray(labels)
    if len(labels) != len(X):
        raise ValueError("Hay que dar una etiqueta de grupo por vértice")
    dist = pdist(X)
    same = pdist(labels[:, None], metric="cityblock") == 0
    if not same.any() or same.all():
        raise ValueError("Se necesitan pares dentro del grupo y entre grupos")
    return float(dist[~same].mean() / dist[same].mean())


@dataclass
class CellResult:
    graph_index: int
    init: InitMethod
    solver: SolverKind
    seed: int
    final_energy: Optional[float] = None
    elapsed_ms: Optional[float] = None
    separation: Optional[float] = None
    error: Optional[str] = None


def _run_cell(
    graph_index: int,
    graph: Graph,
    groups: Optional[NDArray[np.int64]],
    init: InitMethod,
    solver: SolverKind,
    seed: int,
    options: MethodOptions,
) -> CellResult:
    cell = CellResult(graph_index, init, solver, seed)
    try:
        result = run_single(graph, init, solver, seed, options)
    except (LayoutError, ValueError, ArithmeticError) as exc:
        logger.warning(f"Fallo en {init.value}+{solver.value} semilla {seed}: {exc}")
        cell.error = f"{type(exc).__name__}: {exc}"
        return cell
    cell.final_energy = result.final_energy
    cell.elapsed_ms = result.init_ms + result.solve_ms
    if groups is not None:
        cell.separation = group_separation_ratio(result.initial_layout, groups)
    return cell


def _paired_difference(
    cells: dict[tuple, CellResult], graph_index: int, solver: SolverKind, init: InitMethod, other: InitMethod
) -> Optional[float]:
    diffs = []
    for (g_idx, c_init, c_solver, seed), cell in cells.items():
        if (g_idx, c_init, c_solver) != (graph_index, init, solver) or cell.final_energy is None:
            continue
        ref = cells.get((graph_index, other, solver, seed))
        if ref is not None and ref.final_energy is not None:
            diffs.append(cell.final_energy - ref.final_energy)
    return float(np.mean(diffs)) if diffs else None


def summarize(labels: list[str], cell_results: list[CellResult]) -> list[BenchRow]:
    """Agregar por (grafo, init, solver) en orden canónico, independiente del orden de llegada"""
    cells = {(c.graph_index, c.init, c.solver, c.seed): c for c in cell_results}
    keys = sorted({(c.graph_index, c.init.value, c.solver.value) for c in cell_results})
    rows = []
    for graph_index, init_value, solver_value in keys:
        init, solver = InitMethod(init_value), SolverKind(solver_value)
        group = sorted(
            (c for c in cell_results if (c.graph_index, c.init, c.solver) == (graph_index, init, solver)),
            key=lambda c: c.seed,
        )
        ok = [c for c in group if c.error is None]
        failed = [c for c in group if c.error is not None]
        energies = [c.final_energy for c in ok]
        separations = [c.separation for c in ok if c.separation is not None]
        row = BenchRow(graph=labels[graph_index], init=init, solver=solver, runs=len(ok))
        if ok:
            row.mean_f = float(np.mean(energies))
            row.min_f = float(np.min(energies))
            row.max_f = float(np.max(energies))
            row.mean_elapsed_ms = float(np.mean([c.elapsed_ms for c in ok]))
        if separations:
            row.separation = float(np.mean(separations))
        if init != InitMethod.RANDOM:
            row.diff_vs_random = _paired_difference(cells, graph_index, solver, init, InitMethod.RANDOM)
        if init == InitMethod.CN:
            row.diff_vs_sa = _paired_difference(cells, graph_index, solver, init, InitMethod.SA)
        if failed:
            row.status = "error"
            row.error = failed[0].error
        rows.append(row)
    return rows


def run_bench(spec: BenchSpec, transport: Optional[httpx.BaseTransport] = None) -> list[BenchRow]:
    """Ejecutar la matriz completa; un fallo queda registrado en su fila sin detener el lote"""
    labels = [source.label for source in spec.sources]
    tasks, failures = [], []
    for graph_index, source in enumerate(spec.sources):
        try:
            graph = load_graph(source, transport=transport)
        except (LayoutError, OSError) as exc:
            logger.error(f"No se pudo cargar {source.label}: {exc}")
            failures.extend(
                CellResult(graph_index, init, solver, seed, error=f"{type(exc).__name__}: {exc}")
                for init in spec.inits for solver in spec.solvers for seed in spec.seeds
            )
            continue
        groups = generator_groups(source.generator) if source.generator else None
        tasks.extend(
            (graph_index, graph, groups, init, solver, seed, spec.options)
            for init in spec.inits for solver in spec.solvers for seed in spec.seeds
        )

    logger.info(f"Bench: {len(tasks)} ejecuciones con {spec.workers} proceso(s)")
    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            futures = [pool.submit(_run_cell, *task) for task in tasks]
            results = [future.result() for future in futures]
    else:
        results = [_run_cell(*task) for task in tasks]

    rows = summarize(labels, results + failures)
    for row in rows:
        logger.info(f"{row.graph} {row.init.value}+{row.solver.value}: media f={row.mean_f}, estado={row.status}")
    return rows
