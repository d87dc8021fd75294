"""Recocido simulado sobre el círculo unitario (línea base).

Minimiza Σ_{{i,j} ∈ E ∪ E₂} |∠(x_i, x_j)| sobre permutaciones de n posiciones
equiespaciadas. Entre las posiciones s y t el ángulo es 2π·min(δ, n - δ)/n con
δ = |s - t|, así que el objetivo se acumula en enteros y el delta de un intercambio
es exacto. Los pesos se ignoran.
"""
import logging
import math
from collections.abc import Iterable
from typing import Optional

import numpy as np

from app.models.graph import Graph
from app.models.lattice import CirclePerm
from app.models.layout import Layout
from app.schemas.params import SaParams, default_cn_iterations
from app.services.graph_ops import distance_two_pairs

logger = logging.getLogger(__name__)

RNG_CHUNK = 65_536


def angle(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Ángulo con signo de a a b en (-π, π]"""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if (ax == 0.0 and ay == 0.0) or (bx == 0.0 and by == 0.0):
        raise ValueError("El ángulo no está definido para el punto cero")
    theta = math.atan2(ax * by - ay * bx, ax * bx + ay * by)
    return math.pi if theta <= -math.pi else theta


def objective_pairs(graph: Graph, e2: Optional[Iterable[tuple[int, int]]] = None) -> list[tuple[int, int]]:
    """Pares de E ∪ E₂ (base 0, i < j) en orden ascendente"""
    pairs = set(zip(graph.src.tolist(), graph.dst.tolist()))
    pairs.update(distance_two_pairs(graph) if e2 is None else e2)
    return sorted(pairs)


def _slot_gap(s: int, t: int, n: int) -> int:
    delta = abs(s - t)
    return min(delta, n - delta)


def _integer_objective(pairs: list[tuple[int, int]], slot: list[int], n: int) -> int:
    return sum(_slot_gap(slot[i], slot[j], n) for i, j in pairs)


def sa_objective(graph: Graph, e2: Optional[Iterable[tuple[int, int]]], perm: CirclePerm) -> float:
    """Σ |∠(x_i, x_j)| sobre E ∪ E₂ (E₂ se calcula si es None)"""
    if perm.n != graph.n:
        raise ValueError(f"La permutación tiene {perm.n} posiciones y el grafo {graph.n} vértices")
    pairs = objective_pairs(graph, e2)
    return 2.0 * math.pi * _integer_objective(pairs, perm.slot.tolist(), graph.n) / graph.n


def swap_delta(partners: list[list[int]], slot: list[int], u: int, v: int, n: int) -> int:
    """Cambio del objetivo entero al intercambiar las posiciones de u y v, en O(deg)"""
    su, sv = slot[u], slot[v]
    delta = 0
    for w in partners[u]:
        if w != v:
            sw = slot[w]
            delta += _slot_gap(sv, sw, n) - _slot_gap(su, sw, n)
    for w in partners[v]:
        if w != u:
            sw = slot[w]
            delta += _slot_gap(su, sw, n) - _slot_gap(sv, sw, n)
    return delta


def anneal(graph: Graph, sp: Optional[SaParams] = None) -> tuple[CirclePerm, float]:
    """Recocido con intercambios de dos vértices, aceptación de Metropolis y enfriamiento geométrico.

    Devuelve la mejor permutación encontrada y su objetivo.
    """
    sp = sp or SaParams()
    n = graph.n
    if n < 2:
        raise ValueError("El recocido necesita al menos 2 vértices")
    pairs = objective_pairs(graph)
    partners: list[list[int]] = [[] for _ in range(n)]
    for i, j in pairs:
        partners[i].append(j)
        partners[j].append(i)

    n_iter = sp.n_iter or default_cn_iterations(n, graph.num_edges)
    ratio = sp.final_ratio ** (1.0 / (n_iter - 1)) if n_iter > 1 else 1.0
    unit = 2.0 * math.pi / n
    rng = np.random.default_rng(sp.seed)
    slot = rng.permutation(n).tolist()
    current = _integer_objective(pairs, slot, n)
    best, best_slot = current, list(slot)
    accepted = 0

    temp = sp.t_start
    done = 0
    while done < n_iter:
        size = min(RNG_CHUNK, n_iter - done)
        us = rng.integers(0, n, size=size).tolist()
        vs = rng.integers(0, n - 1, size=size).tolist()
        coins = rng.random(size=size).tolist()
        for u, v, coin in zip(us, vs, coins):
            if v >= u:
                v += 1
            delta = swap_delta(partners, slot, u, v, n)
            if delta <= 0 or coin < math.exp(-delta * unit / temp):
                slot[u], slot[v] = slot[v], slot[u]
                current += delta
                accepted += 1
                if current < best:
                    best, best_slot = current, list(slot)
            temp *= ratio
        done += size
    logger.debug(f"SA: {n_iter} iteraciones, {accepted} aceptadas, mejor objetivo {best * unit:.6g}")
    return CirclePerm(best_slot), best * unit


def sa_initial_placement(graph: Graph, sp: Optional[SaParams] = None) -> Layout:
    """Coordenadas sobre el círculo unitario de la mejor permutación del recocido"""
    perm, objective = anneal(graph, sp)
    logger.info(f"Colocación SA: n={graph.n}, objetivo={objective:.6g}")
    return perm.points()

