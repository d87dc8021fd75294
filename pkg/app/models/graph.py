from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from app.core.exceptions import GraphFormatError


@dataclass(frozen=True, eq=False)
class Graph:
    """Grafo no dirigido ponderado.

    Internamente los vértices son 0..n-1; toda la E/S de archivos usa 1..n.
    Las aristas se guardan ordenadas por (src, dst) con src < dst y peso > 0.
    """

    n: int
    src: NDArray[np.int64]
    dst: NDArray[np.int64]
    weight: NDArray[np.float64]
    adjacency: sparse.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError(f"El número de vértices debe ser positivo: {self.n}")
        src = np.asarray(self.src, dtype=np.int64)
        dst = np.asarray(self.dst, dtype=np.int64)
        weight = np.asarray(self.weight, dtype=np.float64)
        if not (src.shape == dst.shape == weight.shape) or src.ndim != 1:
            raise GraphFormatError("Arreglos de aristas con tamaños inconsistentes")
        if src.size:
            if np.any(src >= dst):
                raise GraphFormatError("Cada arista debe cumplir i < j")
            if src.min() < 0 or dst.max() >= self.n:
                raise GraphFormatError("Índice de vértice fuera de rango")
            if np.any(~np.isfinite(weight)) or np.any(weight <= 0):
                raise GraphFormatError("Los pesos de las aristas deben ser positivos y finitos")
            order = np.lexsort((dst, src))
            src, dst, weight = src[order], dst[order], weight[order]
            if np.any((np.diff(src) == 0) & (np.diff(dst) == 0)):
                raise GraphFormatError("Aristas duplicadas")
        for arr in (src, dst, weight):
            arr.setflags(write=False)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "weight", weight)

        rows = np.concatenate([src, dst])
        cols = np.concatenate([dst, src])
        vals = np.concatenate([weight, weight])
        adjacency = sparse.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))
        adjacency.sort_indices()
        object.__setattr__(self, "adjacency", adjacency)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, float]]) -> "Graph":
        """Construir desde aristas (i, j, w) con índices base 0"""
        triples = [(min(i, j), max(i, j), float(w)) for i, j, w in edges]
        if any(i == j for i, j, _ in triples):
            raise GraphFormatError("Lazo (self-loop) no permitido")
        if not triples:
            return cls(n, np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0))
        src, dst, weight = zip(*triples)
        return cls(n, np.array(src), np.array(dst), np.array(weight))

    @property
    def num_edges(self) -> int:
        return int(self.src.size)

    @property
    def sparsity(self) -> float:
        """Densidad 2|E| / (n(n-1))"""
        if self.n < 2:
            return 0.0
        return 2.0 * self.num_edges / (self.n * (self.n - 1))

    def edges(self) -> list[tuple[int, int, float]]:
        """Aristas en base 1, como en los archivos"""
        return [(int(i) + 1, int(j) + 1, float(w)) for i, j, w in zip(self.src, self.dst, self.weight)]

    def neighbors(self, i: int) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
        """Vecinos y pesos del vértice i en O(deg i)"""
        start, end = self.adjacency.indptr[i], self.adjacency.indptr[i + 1]
        return self.adjacency.indices[start:end], self.adjacency.data[start:end]

    def degree(self, i: int) -> int:
        return int(self.adjacency.indptr[i + 1] - self.adjacency.indptr[i])

    @cached_property
    def neighbor_lists(self) -> tuple[tuple[tuple[int, float], ...], ...]:
        """Listas de adyacencia en tipos nativos para los bucles por vértice"""
        indptr, indices, data = self.adjacency.indptr, self.adjacency.indices, self.adjacency.data
        return tuple(
            tuple(zip(indices[indptr[i]:indptr[i + 1]].tolist(), data[indptr[i]:indptr[i + 1]].tolist()))
            for i in range(self.n)
        )

    def binarized(self) -> "Graph":
        """Misma estructura con todos los pesos iguales a 1"""
        return Graph(self.n, self.src, self.dst, np.ones_like(self.weight))

    def permuted(self, perm: Sequence[int]) -> "Graph":
        """Reetiquetar: el vértice v pasa a llamarse perm[v]"""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise ValueError("perm debe ser una permutación de 0..n-1")
        a, b = perm[self.src], perm[self.dst]
        return Graph(self.n, np.minimum(a, b), np.maximum(a, b), self.weight)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True)
class ComponentPartition:
    """Partición de V en componentes conexas V_1 ⊕ … ⊕ V_m"""

    groups: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.groups)

    @property
    def connected(self) -> bool:
        return self.m == 1
