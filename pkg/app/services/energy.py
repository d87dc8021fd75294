"""Modelo continuo de Fruchterman–Reingold.

Energía por par E_ij(d) = a_ij d³/(3k) - k² log(d + ε), con ε = eps_r·k, y objetivo
f(X) = Σ_{i<j} E_ij(‖x_i - x_j‖). Con ε = 0 un par coincidente tiene energía +∞.
"""
import math
from collections.abc import Iterator, Sequence
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist

from app.models.graph import ComponentPartition, Graph
from app.models.layout import Layout
from app.schemas.params import ForceParams, GravityConfig
from app.services.graph_ops import connected_components

# Pares por bloque en las evaluaciones O(n²)
BLOCK_PAIRS = 2_000_000


def default_k(n: int) -> float:
    if n < 1:
        raise ValueError("n debe ser al menos 1")
    return 1.0 / math.sqrt(n)


def pair_energy(d: float, a: float, params: ForceParams) -> float:
    if d < 0:
        raise ValueError(f"Distancia negativa: {d}")
    k, eps = params.k, params.eps
    if d + eps == 0:
        return math.inf
    return a * d**3 / (3.0 * k) - k**2 * math.log(d + eps)


def _row_blocks(n: int) -> Iterator[slice]:
    size = max(1, BLOCK_PAIRS // max(n, 1))
    for start in range(0, n, size):
        yield slice(start, min(n, start + size))


def _check_size(graph: Graph, X: Layout) -> None:
    if X.shape != (graph.n, 2):
        raise ValueError(f"El layout tiene forma {X.shape}, se esperaba ({graph.n}, 2)")


def _edge_lengths(graph: Graph, X: Layout) -> NDArray[np.float64]:
    return np.linalg.norm(X[graph.src] - X[graph.dst], axis=1)


def attractive_energy(graph: Graph, X: Layout, params: ForceParams) -> float:
    """f^a(X) = Σ_E a_ij ‖x_i - x_j‖³ / (3k)"""
    _check_size(graph, X)
    return float(np.sum(graph.weight * _edge_lengths(graph, X) ** 3) / (3.0 * params.k))


def total_energy(graph: Graph, X: Layout, params: ForceParams, clamp: Optional[float] = None) -> float:
    """f(X) sumada en orden (i, j) ascendente por bloques de filas.

    clamp: distancia mínima usada en la repulsión (la usan los solvers cuando ε = 0).
    """
    _check_size(graph, X)
    k, eps = params.k, params.eps
    repulsive = 0.0
    for block in _row_blocks(graph.n):
        dist = cdist(X[block], X)
        rows = np.arange(block.start, block.stop)[:, None]
        upper = np.arange(graph.n)[None, :] > rows
        d = dist[upper]
        if clamp is not None:
            d = np.maximum(d, clamp)
        if eps == 0 and d.size and d.min() == 0:
            return math.inf
        repulsive += float(np.sum(-(k**2) * np.log(d + eps)))
    return attractive_energy(graph, X, params) + repulsive


def energy_gradient(graph: Graph, X: Layout, params: ForceParams, clamp: Optional[float] = None) -> Layout:
    """Gradiente completo de f: la fila i es ∇f_i(x_i)"""
    _check_size(graph, X)
    k, eps = params.k, params.eps
    grad = np.zeros_like(X)
    for block in _row_blocks(graph.n):
        diff = X[block, None, :] - X[None, :, :]
        d = np.linalg.norm(diff, axis=2)
        rows = np.arange(block.stop - block.start)
        d[rows, rows + block.start] = np.inf
        if clamp is not None:
            d = np.maximum(d, clamp)
        elif eps == 0 and d.min() == 0:
            raise ValueError("Par de vértices coincidentes con eps_r = 0")
        # Pares coincidentes: dirección indefinida, no aportan repulsión
        apart = d > 0
        safe = np.where(apart, d, 1.0)
        coef = np.where(apart, -(k**2) / (safe * (safe + eps)), 0.0)
        grad[block] = np.einsum("ij,ijk->ik", coef, diff)

    u = X[graph.src] - X[graph.dst]
    coef = (graph.weight * np.linalg.norm(u, axis=1) / k)[:, None] * u
    for axis in range(2):
        grad[:, axis] += np.bincount(graph.src, weights=coef[:, axis], minlength=graph.n)
        grad[:, axis] -= np.bincount(graph.dst, weights=coef[:, axis], minlength=graph.n)
    return grad


def _vertex_terms(graph: Graph, X: Layout, i: int, params: ForceParams):
    _check_size(graph, X)
    u = X[i] - np.delete(X, i, axis=0)
    d = np.linalg.norm(u, axis=1)
    if params.eps == 0 and np.any(d == 0):
        raise ValueError(f"El vértice {i} coincide con otro vértice y eps_r = 0")
    a = np.delete(graph.adjacency.getrow(i).toarray().ravel(), i)
    # Un vecino en el mismo punto no tiene dirección; su término se omite
    apart = d > 0
    return u[apart], d[apart], a[apart]


def vertex_gradient(graph: Graph, X: Layout, i: int, params: ForceParams) -> NDArray[np.float64]:
    """∇f_i(x_i) = Σ_{j≠i} (a_ij d/k - k²/(d(d+ε))) (x_i - x_j)"""
    u, d, a = _vertex_terms(graph, X, i, params)
    k, eps = params.k, params.eps
    coef = a * d / k - k**2 / (d * (d + eps))
    return coef @ u


def vertex_hessian(graph: Graph, X: Layout, i: int, params: ForceParams) -> NDArray[np.float64]:
    """∇²f_i(x_i): término isótropo más término de rango uno por cada j"""
    u, d, a = _vertex_terms(graph, X, i, params)
    k, eps = params.k, params.eps
    iso = a * d / k - k**2 / (d * (d + eps))
    rank_one = a / (k * d) + k**2 * (2 * d + eps) / (d**3 * (d + eps) ** 2)
    return np.sum(iso) * np.eye(2) + np.einsum("j,ja,jb->ab", rank_one, u, u)


def _attr_terms(graph: Graph, X: Layout, i: int):
    nbrs, w = graph.neighbors(i)
    u = X[i] - X[nbrs]
    d = np.linalg.norm(u, axis=1)
    keep = d > 0
    return u[keep], d[keep], w[keep]


def attr_gradient(graph: Graph, X: Layout, i: int, params: ForceParams) -> NDArray[np.float64]:
    """∇f^a_i(x_i) sobre los vecinos de i, O(deg i)"""
    u, d, w = _attr_terms(graph, X, i)
    return (w * d / params.k) @ u if d.size else np.zeros(2)


def attr_hessian(graph: Graph, X: Layout, i: int, params: ForceParams) -> NDArray[np.float64]:
    """∇²f^a_i(x_i): semidefinida positiva, definida si algún vecino no coincide con x_i"""
    u, d, w = _attr_terms(graph, X, i)
    if not d.size:
        return np.zeros((2, 2))
    iso = np.sum(w * d) / params.k
    return iso * np.eye(2) + np.einsum("j,ja,jb->ab", w / (params.k * d), u, u)


def attr_local_model(
    neighbors: Sequence[tuple[int, float]],
    points: Sequence[tuple[float, float]],
    i: int,
    k: float,
) -> tuple[float, float, float, float, float]:
    """Gradiente y hessiana de f^a_i en escalares nativos: (gx, gy, hxx, hxy, hyy).

    Misma fórmula que attr_gradient/attr_hessian, para el bucle por vértice de CN.
    """
    xi, yi = points[i]
    gx = gy = hxx = hxy = hyy = 0.0
    for j, w in neighbors:
        xj, yj = points[j]
        ux, uy = xi - xj, yi - yj
        d = math.hypot(ux, uy)
        if d == 0.0:
            continue
        c = w * d / k
        r = w / (k * d)
        gx += c * ux
        gy += c * uy
        hxx += c + r * ux * ux
        hxy += r * ux * uy
        hyy += c + r * uy * uy
    return gx, gy, hxx, hxy, hyy


def _edge_cubes(graph: Graph, X: Layout) -> float:
    return float(np.sum(graph.weight * _edge_lengths(graph, X) ** 3))


def optimal_scale(graph: Graph, X: Layout, params: ForceParams) -> float:
    """s* = (k³ n(n-1) / (2 Σ_E a_ij ‖x_i - x_j‖³))^{1/3}, en O(|E|)"""
    _check_size(graph, X)
    cubes = _edge_cubes(graph, X)
    if cubes <= 0:
        raise ValueError("Todas las aristas tienen longitud cero; no hay escala óptima")
    n = graph.n
    return (params.k**3 * n * (n - 1) / (2.0 * cubes)) ** (1.0 / 3.0)


def scaling_potential(graph: Graph, X: Layout, params: ForceParams, s: float) -> float:
    """φ(s) = Σ_E a (s d)³/(3k) - k² Σ_{i<j} log(s d)"""
    if s <= 0:
        raise ValueError("s debe ser positivo")
    n = graph.n
    pairs = n * (n - 1) / 2.0
    log_sum = 0.0
    for block in _row_blocks(n):
        dist = cdist(X[block], X)
        upper = np.arange(n)[None, :] > np.arange(block.start, block.stop)[:, None]
        log_sum += float(np.sum(np.log(dist[upper])))
    k = params.k
    return s**3 * _edge_cubes(graph, X) / (3.0 * k) - k**2 * (pairs * math.log(s) + log_sum)


def scaling_derivative(graph: Graph, X: Layout, params: ForceParams, s: float) -> float:
    """φ'(s) = s² Σ_E a d³ / k - k² n(n-1) / (2s)"""
    if s <= 0:
        raise ValueError("s debe ser positivo")
    k, n = params.k, graph.n
    return s**2 * _edge_cubes(graph, X) / k - k**2 * n * (n - 1) / (2.0 * s)


def scale_layout(X: Layout, s: float) -> Layout:
    if s <= 0:
        raise ValueError(f"El factor de escala debe ser positivo, no {s}")
    return np.asarray(X, dtype=np.float64) * s


def gravity_energy_and_gradient(
    graph: Graph,
    X: Layout,
    config: GravityConfig,
    partition: Optional[ComponentPartition] = None,
) -> tuple[float, Layout]:
    """f_g = Σ_j (|V_j|/2) ‖g_j - c‖²; la fila i del gradiente es g_j - c para i ∈ V_j"""
    _check_size(graph, X)
    partition = partition or connected_components(graph)
    labels = np.asarray(partition.labels)
    sizes = np.bincount(labels, minlength=partition.m).astype(np.float64)
    centroids = np.column_stack(
        [np.bincount(labels, weights=X[:, axis], minlength=partition.m) / sizes for axis in range(2)]
    )
    offset = centroids - np.asarray(config.center, dtype=np.float64)
    energy = float(np.sum(0.5 * sizes * np.sum(offset**2, axis=1)))
    return energy, offset[labels]


def gravity_active(config: Optional[GravityConfig], partition: ComponentPartition) -> bool:
    if config is None or config.enabled is None:
        return partition.m > 1
    return config.enabled


def objective_and_gradient(
    graph: Graph,
    X: Layout,
    params: ForceParams,
    gravity: Optional[GravityConfig] = None,
    partition: Optional[ComponentPartition] = None,
    clamp: Optional[float] = None,
) -> tuple[float, Layout]:
    """f(X) (+ f_g si aplica) y su gradiente, como lo usan los solvers"""
    partition = partition or connected_components(graph)
    energy = total_energy(graph, X, params, clamp=clamp)
    grad = energy_gradient(graph, X, params, clamp=clamp)
    if gravity_active(gravity, partition):
        g_energy, g_grad = gravity_energy_and_gradient(graph, X, gravity or GravityConfig(), partition)
        energy += g_energy
        grad = grad + g_grad
    return energy, grad
