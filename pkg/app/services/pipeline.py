"""Matriz de experimentos: inicialización {random, sa, cn} × solver {fr, lbfgs}."""
import logging
import time
from collections.abc import Iterable
from pathlib import Path
from typing import Optional

import httpx
import numpy as np

from app.models.graph import Graph
from app.models.layout import Layout
from app.models.trace import RunResult
from app.schemas.params import CnParams, ForceParams, SaParams, SolverConfig
from app.schemas.run import GraphSource, InitMethod, MethodOptions, SolverKind
from app.services.cn_placement import cn_initial_placement
from app.services.graph_io import parse_edge_list, parse_matrix_market
from app.services.graph_ops import connected_components, generate
from app.services.sa_placement import sa_initial_placement
from app.services.solvers import fr_solve, lbfgs_solve
from app.services.suitesparse import fetch_suitesparse

logger = logging.getLogger(__name__)

# Iteraciones del solver final según la inicialización
DEFAULT_BUDGETS = {InitMethod.RANDOM: 50, InitMethod.SA: 45, InitMethod.CN: 45}

SOLVERS = {SolverKind.FR: fr_solve, SolverKind.LBFGS: lbfgs_solve}


def random_placement(n: int, seed: int = 0) -> Layout:
    """Posiciones uniformes en el cuadrado unidad"""
    return np.random.default_rng(seed).random((n, 2))


def load_graph(source: GraphSource, transport: Optional[httpx.BaseTransport] = None) -> Graph:
    """Leer, generar o descargar el grafo de un GraphSource"""
    if source.generator is not None:
        graph = generate(source.generator)
    elif source.suitesparse is not None:
        group, name = source.suitesparse.split("/")
        graph = fetch_suitesparse(group, name, transport=transport)
    else:
        path = Path(source.input_file)
        text = path.read_text()
        if path.suffix.lower() == ".mtx" or text.lstrip().startswith("%%MatrixMarket"):
            graph = parse_matrix_market(text)
        else:
            graph = parse_edge_list(text)
    logger.info(f"Grafo {source.label}: n={graph.n}, |E|={graph.num_edges}")
    return graph.binarized() if source.unweighted else graph


def force_params(graph: Graph, options: MethodOptions) -> ForceParams:
    return ForceParams.for_graph(graph.n, k=options.k, eps_r=options.eps_r)


def initial_placement(
    graph: Graph, init: InitMethod, seed: int, params: ForceParams, options: MethodOptions
) -> Layout:
    if init == InitMethod.RANDOM:
        return random_placement(graph.n, seed)
    if init == InitMethod.SA:
        # la línea base no usa pesos
        return sa_initial_placement(graph.binarized(), SaParams(n_iter=options.cn_iters or None, seed=seed))
    cn = CnParams(seed=seed, n_iter=options.cn_iters)
    if options.cn_t0 is not None:
        cn = cn.model_copy(update={"t0": options.cn_t0})
    return cn_initial_placement(graph, params, cn)


def solver_config(init: InitMethod, options: MethodOptions) -> SolverConfig:
    return SolverConfig(
        n_iter=options.iters or DEFAULT_BUDGETS[init],
        t0=options.fr_t0,
        tol=options.tol,
        trace_every=options.trace_every,
        timing=options.timing,
    )


def run_single(
    graph: Graph,
    init: InitMethod,
    solver: SolverKind,
    seed: int,
    options: Optional[MethodOptions] = None,
) -> RunResult:
    """Una ejecución completa: colocación inicial y solver final"""
    options = options or MethodOptions()
    init, solver = InitMethod(init), SolverKind(solver)
    params = force_params(graph, options)
    partition = connected_components(graph)

    started = time.perf_counter()
    X0 = initial_placement(graph, init, seed, params, options)
    init_ms = (time.perf_counter() - started) * 1000.0

    started = time.perf_counter()
    _, trace = SOLVERS[solver](graph, X0, params, solver_config(init, options), partition=partition)
    solve_ms = (time.perf_counter() - started) * 1000.0
    if not options.timing:
        init_ms = solve_ms = 0.0
    logger.info(f"{init.value}+{solver.value} semilla {seed}: f={trace.final_energy:.10g}")
    return RunResult(seed, init.value, solver.value, X0, trace, init_ms, solve_ms)


def pipeline(
    graph: Graph,
    init: InitMethod,
    solver: SolverKind,
    seeds: Iterable[int],
    options: Optional[MethodOptions] = None,
) -> list[RunResult]:
    """Ejecutar la combinación (init, solver) para cada semilla, en orden"""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("Se necesita al menos una semilla")
    return [run_single(graph, init, solver, seed, options) for seed in seeds]
