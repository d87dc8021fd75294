"""Colocación inicial por Newton coordenado sobre la retícula hexagonal.

Cada paso toma un vértice al azar, calcula el paso de Newton de f^a_i restringido a
su bloque 2x2, suma ruido t·r con |r| = 1, redondea a la retícula e intercambia si la
celda está ocupada. Al final se aplica la escala óptima s*.
"""
import logging
import math
from typing import Optional

import numpy as np

from app.core.config import settings
from app.models.graph import Graph
from app.models.lattice import HexCoord, Occupancy
from app.models.layout import Layout
from app.schemas.params import CnParams, ForceParams, default_cn_iterations
from app.services.energy import attr_local_model, optimal_scale, scale_layout
from app.services.graph_ops import connected_components
from app.services.hex_lattice import hex_distance, initial_sample, move_or_swap, round_to_hex

logger = logging.getLogger(__name__)

# Números aleatorios generados por bloques
RNG_CHUNK = 65_536


def temperature(m: int, cp: CnParams, n_iter: Optional[int] = None) -> float:
    """t0·(1 - m/N), nunca negativa"""
    total = cp.n_iter if n_iter is None else n_iter
    if total is None:
        raise ValueError("Falta el número de iteraciones")
    if total == 0:
        return 0.0
    if m < 0 or m > total:
        raise ValueError(f"Iteración {m} fuera de [0, {total}]")
    return max(0.0, cp.t0 * (1.0 - m / total))


def newton_target(
    point: tuple[float, float],
    local: tuple[float, float, float, float, float],
    cp: CnParams,
) -> tuple[tuple[float, float], bool]:
    """x_i - H⁻¹∇ a partir del modelo local (gx, gy, hxx, hxy, hyy).

    Si el menor autovalor es < guard_threshold·tr(H) se usa H + λI con
    λ = hessian_guard·tr(H)/2 + 1e-12. Devuelve el objetivo y si actuó la guarda.
    """
    gx, gy, hxx, hxy, hyy = local
    trace = hxx + hyy
    min_eig = 0.5 * trace - math.hypot(0.5 * (hxx - hyy), hxy)
    guarded = trace <= 0.0 or min_eig < cp.guard_threshold * trace
    if guarded:
        ridge = cp.hessian_guard * trace / 2.0 + 1e-12
        hxx += ridge
        hyy += ridge
    det = hxx * hyy - hxy * hxy
    dx = (hyy * gx - hxy * gy) / det
    dy = (hxx * gy - hxy * gx) / det
    return (point[0] - dx, point[1] - dy), guarded


def cn_step(
    graph: Graph,
    occ: Occupancy,
    i: int,
    t: float,
    rng: np.random.Generator,
    params: ForceParams,
    cp: CnParams,
) -> Occupancy:
    """Un paso de Newton coordenado con ruido, redondeo e intercambio sobre el vértice i"""
    if not occ.is_placed(i):
        raise ValueError(f"El vértice {i} no está colocado")
    local = attr_local_model(graph.neighbor_lists[i], occ.points, i, params.k)
    (tx, ty), _ = newton_target(occ.points[i], local, cp)
    if t > 0:
        theta = rng.uniform(0.0, 2.0 * math.pi)
        tx += t * math.cos(theta)
        ty += t * math.sin(theta)
    return move_or_swap(occ, i, round_to_hex((tx, ty)))


def _resolve_iterations(graph: Graph, cp: CnParams) -> int:
    if cp.n_iter is not None:
        return cp.n_iter
    raw = -(-2 * graph.n**3 // max(graph.num_edges, 1))
    if raw > settings.CN_ITER_CAP:
        logger.warning(f"Iteraciones de CN limitadas de {raw} a {settings.CN_ITER_CAP}")
    return default_cn_iterations(graph.n, graph.num_edges)


def _run_component(graph: Graph, params: ForceParams, cp: CnParams, rng: np.random.Generator) -> Occupancy:
    """Bucle de CN sobre un grafo conexo; devuelve la ocupación final"""
    occ = Occupancy(graph.n, initial_sample(graph.n, rng))
    if graph.num_edges == 0:
        return occ
    n_iter = _resolve_iterations(graph, cp)
    nbrs, points, k = graph.neighbor_lists, occ.points, params.k
    guarded_steps = 0
    done = 0
    while done < n_iter:
        size = min(RNG_CHUNK, n_iter - done)
        vertices = rng.integers(0, graph.n, size=size).tolist()
        thetas = rng.uniform(0.0, 2.0 * math.pi, size=size).tolist()
        for offset in range(size):
            i = vertices[offset]
            t = cp.t0 * (1.0 - (done + offset) / n_iter)
            local = attr_local_model(nbrs[i], points, i, k)
            (tx, ty), guarded = newton_target(points[i], local, cp)
            guarded_steps += guarded
            if t > 0.0:
                tx += t * math.cos(thetas[offset])
                ty += t * math.sin(thetas[offset])
            occ.move(i, round_to_hex((tx, ty)))
        done += size
    if guarded_steps:
        logger.warning(f"Guarda de la hessiana activada en {guarded_steps} de {n_iter} pasos")
    logger.debug(f"CN: {n_iter} iteraciones sobre {graph.n} vértices")
    return occ


def _subgraph(graph: Graph, vertices: tuple[int, ...], labels: np.ndarray, label: int) -> Graph:
    index = np.full(graph.n, -1, dtype=np.int64)
    index[list(vertices)] = np.arange(len(vertices))
    mask = labels[graph.src] == label
    return Graph(len(vertices), index[graph.src[mask]], index[graph.dst[mask]], graph.weight[mask])


def _pack_components(blocks: list[list[HexCoord]]) -> list[list[HexCoord]]:
    """Colocar cada componente en filas, sin solaparse y con una celda de separación"""
    centered, radii = [], []
    for cells in blocks:
        cq = round(sum(c.q for c in cells) / len(cells))
        cr = round(sum(c.r for c in cells) / len(cells))
        shifted = [HexCoord(c.q - cq, c.r - cr) for c in cells]
        centered.append(shifted)
        radii.append(max(hex_distance(c, HexCoord(0, 0)) for c in shifted))

    row_width = math.ceil(math.sqrt(sum((2 * rad + 2) ** 2 for rad in radii)))
    placed: list[list[HexCoord]] = []
    row_gap = 2 * max(radii) + 2
    row_r, cursor, prev_rad = 0, 0, None
    for cells, rad in zip(centered, radii):
        if prev_rad is not None and cursor + prev_rad + rad + 2 > row_width:
            row_r += row_gap
            cursor, prev_rad = 0, None
        if prev_rad is not None:
            cursor += prev_rad + rad + 2
        q_center = cursor - row_r // 2
        placed.append([HexCoord(c.q + q_center, c.r + row_r) for c in cells])
        prev_rad = rad
    return placed


def cn_initial_placement(graph: Graph, params: ForceParams, cp: Optional[CnParams] = None) -> Layout:
    """Colocación inicial CN reescalada por s*; determinista para una semilla dada"""
    cp = cp or CnParams()
    partition = connected_components(graph)
    if partition.connected:
        occ = _run_component(graph, params, cp, np.random.default_rng(cp.seed))
    else:
        logger.info(f"Grafo con {partition.m} componentes: CN por componente")
        labels = np.asarray(partition.labels)
        streams = np.random.SeedSequence(cp.seed).spawn(partition.m)
        blocks = []
        for label, (vertices, stream) in enumerate(zip(partition.groups, streams)):
            sub = _subgraph(graph, vertices, labels, label)
            blocks.append(_run_component(sub, params, cp, np.random.default_rng(stream)).cells())
        cells: list[HexCoord | None] = [None] * graph.n
        for vertices, block in zip(partition.groups, _pack_components(blocks)):
            for v, cell in zip(vertices, block):
                cells[v] = cell
        occ = Occupancy(graph.n, cells)

    layout = occ.to_layout()
    if graph.num_edges == 0:
        # sin aristas no hay s*: la separación de la retícula pasa a ser k
        return scale_layout(layout, params.k)
    return scale_layout(layout, optimal_scale(graph, layout, params))
