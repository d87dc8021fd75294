import math
from collections.abc import Iterable
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

SQRT3_2 = math.sqrt(3.0) / 2.0


class HexCoord(NamedTuple):
    """Coordenada axial (q, r) de la retícula hexagonal unitaria"""

    q: int
    r: int

    def to_point(self) -> tuple[float, float]:
        return (self.q + 0.5 * self.r, SQRT3_2 * self.r)


class Occupancy:
    """Asignación biyectiva vértice <-> celda de la retícula.

    Un único escritor; cada celda aloja a lo sumo un vértice. También mantiene
    la imagen euclídea de cada celda ocupada para los bucles de CN.
    """

    def __init__(self, n: int, cells: Iterable[HexCoord] | None = None):
        self.n = n
        self._cell_of: list[HexCoord | None] = [None] * n
        self._vertex_at: dict[HexCoord, int] = {}
        self.points: list[tuple[float, float]] = [(0.0, 0.0)] * n
        if cells is not None:
            for i, cell in enumerate(cells):
                self.place(i, HexCoord(*cell))

    def place(self, i: int, cell: HexCoord) -> None:
        """Colocar un vértice sin ubicación en una celda libre"""
        if self._cell_of[i] is not None:
            raise ValueError(f"El vértice {i} ya está colocado")
        if cell in self._vertex_at:
            raise ValueError(f"La celda {cell} ya está ocupada")
        self._assign(i, cell)

    def _assign(self, i: int, cell: HexCoord) -> None:
        self._cell_of[i] = cell
        self._vertex_at[cell] = i
        self.points[i] = cell.to_point()

    def _release(self, i: int) -> HexCoord:
        cell = self._cell_of[i]
        del self._vertex_at[cell]
        self._cell_of[i] = None
        return cell

    def move(self, i: int, target: HexCoord) -> int | None:
        """Mover i a target; si está ocupada por j, j pasa a la celda anterior de i.

        Devuelve el vértice intercambiado o None.
        """
        current = self._cell_of[i]
        if current is None:
            raise ValueError(f"El vértice {i} no está colocado")
        if target == current:
            return None
        j = self._vertex_at.get(target)
        self._release(i)
        if j is None:
            self._assign(i, target)
            return None
        self._release(j)
        self._assign(i, target)
        self._assign(j, current)
        return j

    def cell_of(self, i: int) -> HexCoord | None:
        return self._cell_of[i]

    def vertex_at(self, cell: HexCoord) -> int | None:
        return self._vertex_at.get(cell)

    def is_placed(self, i: int) -> bool:
        return self._cell_of[i] is not None

    def cells(self) -> list[HexCoord]:
        if any(c is None for c in self._cell_of):
            raise ValueError("Hay vértices sin colocar")
        return list(self._cell_of)

    def is_consistent(self) -> bool:
        """Comprobar que los dos mapas son biyecciones inversas"""
        placed = [(i, c) for i, c in enumerate(self._cell_of) if c is not None]
        if len(placed) != len(self._vertex_at):
            return False
        return all(self._vertex_at.get(c) == i for i, c in placed)

    def to_layout(self) -> NDArray[np.float64]:
        return np.array(self.points, dtype=np.float64).reshape(self.n, 2)

    def __len__(self) -> int:
        return len(self._vertex_at)


class CirclePerm:
    """Colocación sobre Q^circle: el vértice v ocupa la posición slot[v] (0..n-1).

    La posición s corresponde al punto (cos 2π(s+1)/n, sin 2π(s+1)/n).
    """

    def __init__(self, slot: Iterable[int]):
        self.slot = np.asarray(list(slot), dtype=np.int64)
        n = self.slot.size
        if n == 0 or not np.array_equal(np.sort(self.slot), np.arange(n)):
            raise ValueError("slot debe ser una permutación de 0..n-1")

    @property
    def n(self) -> int:
        return int(self.slot.size)

    def points(self) -> NDArray[np.float64]:
        theta = 2.0 * np.pi * (self.slot + 1) / self.n
        return np.column_stack([np.cos(theta), np.sin(theta)])

    def rotated(self, shift: int) -> "CirclePerm":
        return CirclePerm((self.slot + shift) % self.n)
