"""Solvers finales: simulación de fuerzas FR y L-BFGS sobre el layout aplanado."""
import logging
import time
from collections import deque
from collections.abc import Callable
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from app.core.config import settings
from app.core.exceptions import NumericalError
from app.models.graph import ComponentPartition, Graph
from app.models.layout import Layout, as_layout
from app.models.trace import Termination, Trace
from app.schemas.params import ForceParams, GravityConfig, SolverConfig
from app.services.energy import (
    energy_gradient,
    gravity_active,
    gravity_energy_and_gradient,
    objective_and_gradient,
    total_energy,
)
from app.services.graph_ops import connected_components

logger = logging.getLogger(__name__)

# Vértices con ‖∇f_i‖ por debajo de este valor no se mueven
GRADIENT_FLOOR = 1e-12
ARMIJO_C1 = 1e-4
MAX_BACKTRACKS = 60

Objective = Callable[[NDArray[np.float64]], tuple[float, NDArray[np.float64]]]


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.start = time.perf_counter()

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.start) * 1000.0 if self.enabled else 0.0


def _clamp_for(params: ForceParams) -> Optional[float]:
    return settings.DISTANCE_CLAMP if params.eps == 0 else None


def fr_temperature(m: int, t0: float, n_iter: int) -> float:
    """Temperatura de la iteración m (base 0): t0·(1 - m/N)"""
    return max(0.0, t0 * (1.0 - m / n_iter))


def default_fr_t0(X0: Layout) -> float:
    """0.1 × lado mayor de la caja que contiene X0"""
    extent = float(np.max(np.ptp(X0, axis=0))) if len(X0) else 0.0
    return 0.1 * extent


def fr_solve(
    graph: Graph,
    X0: Layout,
    params: ForceParams,
    config: Optional[SolverConfig] = None,
    gravity: Optional[GravityConfig] = None,
    partition: Optional[ComponentPartition] = None,
) -> tuple[Layout, Trace]:
    """Simulación FR: todos los vértices se mueven t en la dirección -∇f_i/‖∇f_i‖ desde la misma foto"""
    config = config or SolverConfig()
    X = as_layout(X0, graph.n).copy()
    partition = partition or connected_components(graph)
    use_gravity = gravity_active(gravity, partition)
    gravity = gravity or GravityConfig()
    clamp = _clamp_for(params)
    t0 = config.t0 if config.t0 is not None else default_fr_t0(X)
    if t0 <= 0:
        t0 = 0.1 * params.k
    tol = config.tol if config.tol is not None else 1e-6 * params.k

    def energy(Y: Layout) -> float:
        value = total_energy(graph, Y, params, clamp=clamp)
        if use_gravity:
            value += gravity_energy_and_gradient(graph, Y, gravity, partition)[0]
        return value

    clock = _Clock(config.timing)
    trace = Trace()
    trace.append(0, energy(X), clock.elapsed_ms())
    termination = Termination.MAX_ITER
    iteration = 0
    for m in range(config.n_iter):
        iteration = m + 1
        grad = energy_gradient(graph, X, params, clamp=clamp)
        if use_gravity:
            grad += gravity_energy_and_gradient(graph, X, gravity, partition)[1]
        norms = np.linalg.norm(grad, axis=1)
        moving = norms >= GRADIENT_FLOOR
        t = fr_temperature(m, t0, config.n_iter)
        step = np.zeros_like(X)
        step[moving] = t * grad[moving] / norms[moving, None]
        X -= step
        if not np.all(np.isfinite(X)):
            raise NumericalError(f"Posición no finita en la iteración {iteration} de FR", iteration=iteration)

        displacement = float(np.mean(np.linalg.norm(step, axis=1)))
        converged = displacement < tol
        if converged or iteration % config.trace_every == 0 or iteration == config.n_iter:
            trace.append(iteration, energy(X), clock.elapsed_ms())
            logger.debug(f"FR iteración {iteration}: t={t:.3g}, f={trace.final_energy:.10g}")
        if converged:
            termination = Termination.CONVERGED
            break

    trace.layout, trace.termination, trace.iterations = X, termination, iteration
    logger.info(f"FR terminado tras {iteration} iteraciones ({termination.value}), f={trace.final_energy:.10g}")
    return X, trace


def two_loop_direction(grad: NDArray[np.float64], history: deque) -> NDArray[np.float64]:
    """-H_k ∇f por la recursión de dos bucles, con H_0 = γI y γ = sᵀy/yᵀy del último par"""
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(history):
        alpha = rho * float(s @ q)
        q -= alpha * y
        alphas.append(alpha)
    s, y, _ = history[-1]
    q *= float(s @ y) / float(y @ y)
    for (s, y, rho), alpha in zip(history, reversed(alphas)):
        beta = rho * float(y @ q)
        q += (alpha - beta) * s
    return -q


def lbfgs_minimize(
    fun: Objective,
    x0: NDArray[np.float64],
    n_iter: int,
    memory: int = 10,
    tol: float = 0.0,
    callback: Optional[Callable[[int, float, NDArray[np.float64]], None]] = None,
) -> tuple[NDArray[np.float64], float, Termination, int]:
    """L-BFGS con búsqueda lineal de Armijo (c1 = 1e-4, reducción a la mitad).

    El primer paso, y cualquier reinicio, usa -∇f con longitud a lo sumo 1.
    """
    x = np.asarray(x0, dtype=np.float64).copy()
    f, g = fun(x)
    if not np.isfinite(f):
        raise NumericalError("Energía no finita en el punto inicial", iteration=0)
    if callback is not None:
        callback(0, f, x)
    history: deque = deque(maxlen=memory)
    termination = Termination.MAX_ITER
    iteration = 0
    for m in range(n_iter):
        g_norm = float(np.linalg.norm(g))
        if g_norm < tol:
            termination = Termination.GRADIENT_TOL
            break
        d = two_loop_direction(g, history) if history else -g / max(g_norm, 1.0)
        slope = float(g @ d)
        if slope >= 0:
            history.clear()
            d = -g / max(g_norm, 1.0)
            slope = float(g @ d)

        alpha = 1.0
        for _ in range(MAX_BACKTRACKS):
            x_new = x + alpha * d
            f_new, g_new = fun(x_new)
            if f_new <= f + ARMIJO_C1 * alpha * slope:
                break
            alpha *= 0.5
        else:
            termination = Termination.LINE_SEARCH_FAILED
            logger.warning(f"Búsqueda lineal fallida en la iteración {m + 1}")
            break

        s, y = x_new - x, g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            history.append((s, y, 1.0 / sy))
        x, f, g = x_new, f_new, g_new
        iteration = m + 1
        if callback is not None:
            callback(iteration, f, x)
    return x, f, termination, iteration


def lbfgs_solve(
    graph: Graph,
    X0: Layout,
    params: ForceParams,
    config: Optional[SolverConfig] = None,
    gravity: Optional[GravityConfig] = None,
    partition: Optional[ComponentPartition] = None,
) -> tuple[Layout, Trace]:
    """L-BFGS sobre X̄ ∈ R^{2n}; las energías registradas no crecen"""
    config = config or SolverConfig()
    X = as_layout(X0, graph.n)
    partition = partition or connected_components(graph)
    clamp = _clamp_for(params)
    tol = config.tol if config.tol is not None else 1e-6 * params.k
    shape = X.shape

    def fun(flat: NDArray[np.float64]) -> tuple[float, NDArray[np.float64]]:
        energy, grad = objective_and_gradient(graph, flat.reshape(shape), params, gravity, partition, clamp)
        return energy, grad.ravel()

    clock = _Clock(config.timing)
    trace = Trace()

    def record(iteration: int, energy: float, _x: NDArray[np.float64]) -> None:
        if iteration % config.trace_every == 0:
            trace.append(iteration, energy, clock.elapsed_ms())
            logger.debug(f"L-BFGS iteración {iteration}: f={energy:.10g}")

    flat, energy, termination, iteration = lbfgs_minimize(
        fun, X.ravel(), config.n_iter, memory=config.memory, tol=tol, callback=record
    )
    if iteration > trace.records[-1].iteration:
        trace.append(iteration, energy, clock.elapsed_ms())
    layout = flat.reshape(shape)
    if not np.all(np.isfinite(layout)):
        raise NumericalError(f"Posición no finita tras {iteration} iteraciones de L-BFGS", iteration=iteration)
    trace.layout, trace.termination, trace.iterations = layout, termination, iteration
    logger.info(f"L-BFGS terminado tras {iteration} iteraciones ({termination.value}), f={energy:.10g}")
    return layout, trace
