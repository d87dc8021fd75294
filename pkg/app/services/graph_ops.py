import logging

import numpy as np
from numpy.typing import NDArray
from scipy import sparse
from scipy.sparse import csgraph

from app.core.exceptions import GraphFormatError
from app.models.graph import ComponentPartition, Graph

logger = logging.getLogger(__name__)

# Grafo ponderado de tres grupos: 100 vértices (34/33/33), 1000 aristas, pesos 1.0 / 0.1
GROUPED_PRESET = {"n": 100, "groups": 3, "edge_count": 1000, "w_in": 1.0, "w_out": 0.1}


def connected_components(graph: Graph) -> ComponentPartition:
    """Componentes conexas maximales, ordenadas por su vértice mínimo"""
    m, labels = csgraph.connected_components(graph.adjacency, directed=False)
    groups: list[list[int]] = [[] for _ in range(m)]
    for v, label in enumerate(labels.tolist()):
        groups[label].append(v)
    groups.sort(key=lambda grp: grp[0])
    relabel = np.empty(graph.n, dtype=np.int64)
    for idx, grp in enumerate(groups):
        relabel[grp] = idx
    return ComponentPartition(tuple(tuple(grp) for grp in groups), tuple(relabel.tolist()))


def distance_two_pairs(graph: Graph) -> set[tuple[int, int]]:
    """Pares {i, j} ∉ E a distancia 2 (en saltos, sin pesos)"""
    hops = graph.adjacency.copy()
    hops.data[:] = 1.0
    reach = sparse.triu(hops @ hops, k=1).tocsr()
    reach = (reach - reach.multiply(hops)).tocsr()
    reach.eliminate_zeros()
    reach = reach.tocoo()
    return set(zip(reach.row.tolist(), reach.col.tolist()))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("Un ciclo necesita al menos 3 vértices")
    src = np.arange(n)
    dst = (src + 1) % n
    return Graph(n, np.minimum(src, dst), np.maximum(src, dst), np.ones(n))


def binary_tree(depth: int) -> Graph:
    """Árbol binario perfecto con 2^(depth+1) - 1 vértices"""
    if depth < 0:
        raise ValueError("La profundidad debe ser no negativa")
    n = 2 ** (depth + 1) - 1
    child = np.arange(1, n)
    return Graph(n, (child - 1) // 2, child, np.ones(n - 1))


def group_labels(n: int, groups: int) -> NDArray[np.int64]:
    """Grupo de cada vértice: bloques contiguos lo más parejos posible"""
    labels = np.empty(n, dtype=np.int64)
    for idx, block in enumerate(np.array_split(np.arange(n), groups)):
        labels[block] = idx
    return labels


def grouped_random(n: int, groups: int, edge_count: int, w_in: float, w_out: float, seed: int = 0) -> Graph:
    """Grafo aleatorio con grupos: w_in dentro del mismo grupo, w_out entre grupos"""
    if n < 2 or groups < 1 or groups > n or edge_count < 1 or w_in <= 0 or w_out <= 0:
        raise ValueError("Parámetros del generador por grupos no válidos")
    total_pairs = n * (n - 1) // 2
    if edge_count > total_pairs:
        raise ValueError(f"No caben {edge_count} aristas en un grafo de {n} vértices")
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    chosen = np.sort(rng.choice(total_pairs, size=edge_count, replace=False))
    src, dst = rows[chosen], cols[chosen]
    labels = group_labels(n, groups)
    weight = np.where(labels[src] == labels[dst], w_in, w_out)
    return Graph(n, src, dst, weight)


def generate(kind: str, seed: int = 0) -> Graph:
    """Construir un grafo sintético desde 'cycle:N', 'btree:D' o 'grouped[:n,groups,edges,w_in,w_out]'"""
    name, _, args = kind.partition(":")
    try:
        if name == "cycle":
            graph = cycle_graph(int(args))
        elif name in ("btree", "binary_tree"):
            graph = binary_tree(int(args))
        elif name in ("grouped", "grouped_random"):
            params = dict(GROUPED_PRESET)
            if args:
                n, grp, edges, w_in, w_out = args.split(",")
                params = {"n": int(n), "groups": int(grp), "edge_count": int(edges),
                          "w_in": float(w_in), "w_out": float(w_out)}
            graph = grouped_random(seed=seed, **params)
        else:
            raise GraphFormatError(f"Generador desconocido: {name!r}")
    except ValueError as exc:
        if isinstance(exc, GraphFormatError):
            raise
        raise GraphFormatError(f"Especificación de generador inválida {kind!r}: {exc}") from exc
    logger.info(f"Grafo generado {kind}: n={graph.n}, |E|={graph.num_edges}")
    return graph


def generator_groups(kind: str) -> NDArray[np.int64] | None:
    """Etiquetas de grupo de un generador 'grouped'; None para los demás"""
    name, _, args = kind.partition(":")
    if name not in ("grouped", "grouped_random"):
        return None
    if args:
        n, groups = (int(tok) for tok in args.split(",")[:2])
    else:
        n, groups = GROUPED_PRESET["n"], GROUPED_PRESET["groups"]
    return group_labels(n, groups)
