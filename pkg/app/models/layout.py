import numpy as np
from numpy.typing import ArrayLike, NDArray

# Posiciones X = (x_1, …, x_n) como matriz (n, 2)
Layout = NDArray[np.float64]


def as_layout(X: ArrayLike, n: int | None = None) -> Layout:
    """Validar y convertir a un layout (n, 2) de flotantes finitos"""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"El layout debe tener forma (n, 2), no {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"El layout tiene {arr.shape[0]} posiciones pero el grafo {n} vértices")
    if not np.all(np.isfinite(arr)):
        raise ValueError("El layout contiene coordenadas no finitas")
    return arr
