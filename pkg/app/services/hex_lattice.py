"""Retícula hexagonal unitaria Q^hex: coordenadas axiales (q, r) ↦ (q + r/2, (√3/2) r)."""
import math

import numpy as np

from app.models.lattice import SQRT3_2, HexCoord, Occupancy


def to_euclidean(cell: HexCoord) -> tuple[float, float]:
    return HexCoord(*cell).to_point()


def round_to_hex(point: tuple[float, float]) -> HexCoord:
    """Punto de la retícula más cercano a point.

    Redondeo cúbico (x_c = q, z_c = r, y_c = -q - r): se redondea cada componente y
    se corrige la de mayor residuo. Los empates exactos quedan resueltos por esta regla.
    """
    x, y = float(point[0]), float(point[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"Punto no finito: ({x}, {y})")
    r = y / SQRT3_2
    q = x - 0.5 * r
    s = -q - r
    rq, rr, rs = round(q), round(r), round(s)
    dq, dr, ds = abs(rq - q), abs(rr - r), abs(rs - s)
    if dq > dr and dq > ds:
        rq = -rr - rs
    elif dr > ds:
        rr = -rq - rs
    return HexCoord(int(rq), int(rr))


def hex_distance(a: HexCoord, b: HexCoord) -> int:
    dq, dr = a[0] - b[0], a[1] - b[1]
    return max(abs(dq), abs(dr), abs(dq + dr))


def hex_disk(radius: int) -> list[HexCoord]:
    """Celdas a distancia hexagonal ≤ radius del origen, ordenadas por (q, r); 1 + 3R(R+1) celdas"""
    if radius < 0:
        raise ValueError("El radio debe ser no negativo")
    return [
        HexCoord(q, r)
        for q in range(-radius, radius + 1)
        for r in range(max(-radius, -q - radius), min(radius, -q + radius) + 1)
    ]


def disk_radius_for(n: int) -> int:
    """Menor R con 1 + 3R(R+1) ≥ n"""
    radius = 0
    while 1 + 3 * radius * (radius + 1) < n:
        radius += 1
    return radius


def initial_sample(n: int, rng: np.random.Generator) -> list[HexCoord]:
    """n celdas distintas, uniformes sin reemplazo, del menor disco hexagonal que las contiene"""
    if n < 1:
        raise ValueError("n debe ser al menos 1")
    disk = hex_disk(disk_radius_for(n))
    chosen = rng.choice(len(disk), size=n, replace=False)
    return [disk[idx] for idx in chosen.tolist()]


def move_or_swap(occ: Occupancy, i: int, target: HexCoord) -> Occupancy:
    """Mover i a target; si la ocupa otro vértice, intercambiar sus celdas"""
    occ.move(i, HexCoord(*target))
    return occ
