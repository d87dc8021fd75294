"""Lectura y escritura de grafos: Matrix Market, lista de aristas y simetrización de pesos."""
import io
import logging
import re
from pathlib import Path
from typing import IO, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import sparse
from scipy.io import mmread

from app.core.exceptions import GraphFormatError
from app.models.graph import Graph

logger = logging.getLogger(__name__)

Source = Union[str, bytes, Path, IO[str], IO[bytes]]

MM_HEADER_RE = re.compile(
    r"^%%MatrixMarket\s+matrix\s+coordinate\s+(real|integer|pattern)\s+(general|symmetric|skew-symmetric)\s*$",
    re.IGNORECASE,
)
COMMENT_RE = re.compile(r"#.*")


def _read_text(source: Source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, bytes):
        return source.decode()
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def _merge_pairs(n: int, rows: NDArray, cols: NDArray, vals: NDArray) -> Graph:
    """Unir entradas por par no ordenado: media de |a| de las entradas presentes.

    Con (i,j) y (j,i) presentes coincide con A' = (|A| + |A|ᵀ)/2. La diagonal se descarta.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.abs(np.asarray(vals, dtype=np.float64))
    off = rows != cols
    lo = np.minimum(rows, cols)[off]
    hi = np.maximum(rows, cols)[off]
    vals = vals[off]
    keys, inverse = np.unique(lo * n + hi, return_inverse=True)
    totals = np.bincount(inverse, weights=vals, minlength=keys.size)
    counts = np.bincount(inverse, minlength=keys.size)
    weight = totals / np.maximum(counts, 1)
    keep = weight > 0
    return Graph(n, (keys // n)[keep], (keys % n)[keep], weight[keep])


def parse_matrix_market(source: Source) -> Graph:
    """Leer una matriz Matrix Market en formato coordenado como grafo"""
    text = _read_text(source)
    lines = text.splitlines()
    if not lines or not MM_HEADER_RE.match(lines[0].strip()):
        raise GraphFormatError("Cabecera Matrix Market inválida o no soportada")

    size_line = next((ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")), None)
    if size_line is None:
        raise GraphFormatError("Falta la línea de dimensiones")
    try:
        n_rows, n_cols, _nnz = (int(tok) for tok in size_line.split())
    except ValueError as exc:
        raise GraphFormatError(f"Línea de dimensiones mal formada: {size_line!r}") from exc
    if n_rows <= 0 or n_cols <= 0:
        raise GraphFormatError(f"Dimensiones no positivas: {n_rows} x {n_cols}")
    if n_rows != n_cols:
        raise GraphFormatError(f"La matriz de adyacencia debe ser cuadrada: {n_rows} x {n_cols}")

    try:
        matrix = sparse.coo_matrix(mmread(io.BytesIO(text.encode())))
    except Exception as exc:
        raise GraphFormatError(f"Error al leer Matrix Market: {exc}") from exc
    if matrix.shape != (n_rows, n_cols):
        raise GraphFormatError("Índice fuera de rango o dimensiones inconsistentes")

    graph = _merge_pairs(n_rows, matrix.row, matrix.col, matrix.data)
    if graph.num_edges == 0:
        raise GraphFormatError("El grafo no tiene aristas tras descartar la diagonal")
    logger.info(f"Matrix Market leído: n={graph.n}, |E|={graph.num_edges}")
    return graph


def _parse_edge_line(lineno: int, raw: str, tokens: list[str]) -> tuple[int, int, float]:
    if len(tokens) not in (2, 3):
        raise GraphFormatError(f"Línea {lineno}: se esperaban 'i j [w]'")
    try:
        i, j = int(tokens[0]), int(tokens[1])
        w = float(tokens[2]) if len(tokens) == 3 else 1.0
    except ValueError as exc:
        raise GraphFormatError(f"Línea {lineno}: valor no numérico en {raw!r}") from exc
    if i < 1 or j < 1:
        raise GraphFormatError(f"Línea {lineno}: los índices empiezan en 1")
    if i == j:
        raise GraphFormatError(f"Línea {lineno}: lazo (self-loop) {i}-{j}")
    if not np.isfinite(w) or w <= 0:
        raise GraphFormatError(f"Línea {lineno}: el peso debe ser positivo, no {w}")
    return i - 1, j - 1, w


def _bare_header(first: tuple[int, str, list[str]], edges: list[tuple[int, int, float]]) -> tuple[int, int] | None:
    """Cabecera 'n m' sin '%': solo si declara exactamente las aristas que siguen y n las cubre"""
    _, _, tokens = first
    if len(tokens) != 2:
        return None
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError:
        return None
    if n < 1 or m != len(edges):
        return None
    if any(max(i, j) >= n for i, j, _ in edges):
        return None
    return n, m


def parse_edge_list(source: Source) -> Graph:
    """Leer una lista de aristas 'i j [w]' (base 1, '#' comentarios, cabecera opcional 'n m' o '% n m')"""
    text = _read_text(source)
    header: tuple[int, int] | None = None
    data: list[tuple[int, str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("%"):
            if header is not None or data:
                raise GraphFormatError(f"Línea {lineno}: la cabecera debe preceder a las aristas")
            try:
                n_hdr, m_hdr = (int(tok) for tok in stripped[1:].split())
            except ValueError as exc:
                raise GraphFormatError(f"Línea {lineno}: cabecera inválida {raw!r}") from exc
            if n_hdr <= 0 or m_hdr < 0:
                raise GraphFormatError(f"Línea {lineno}: cabecera con valores no válidos")
            header = (n_hdr, m_hdr)
            continue
        line = COMMENT_RE.sub("", stripped).strip()
        if line:
            data.append((lineno, raw, line.split()))

    if header is None and data:
        rest = [_parse_edge_line(*entry) for entry in data[1:]]
        header = _bare_header(data[0], rest)
        if header is not None:
            logger.debug(f"Cabecera 'n m' detectada en la línea {data[0][0]}: n={header[0]}, m={header[1]}")
            edges = rest
        else:
            edges = [_parse_edge_line(*data[0]), *rest]
    else:
        edges = [_parse_edge_line(*entry) for entry in data]

    rows = [i for i, _, _ in edges]
    cols = [j for _, j, _ in edges]
    vals = [w for _, _, w in edges]
    max_index = max(max(rows, default=-1), max(cols, default=-1)) + 1
    if header is not None:
        n, m = header
        if max_index > n:
            raise GraphFormatError(f"Índice {max_index} fuera de rango para n={n}")
        if m != len(rows):
            raise GraphFormatError(f"La cabecera declara {m} aristas pero hay {len(rows)}")
    else:
        n = max_index
    if n < 1:
        raise GraphFormatError("Lista de aristas vacía")
    return _merge_pairs(n, np.array(rows), np.array(cols), np.array(vals))


def serialize_edge_list(graph: Graph) -> str:
    """Escribir el grafo en formato lista de aristas con cabecera '% n m'"""
    lines = [f"% {graph.n} {graph.num_edges}"]
    lines.extend(f"{i} {j} {w!r}" for i, j, w in graph.edges())
    return "\n".join(lines) + "\n"


def normalize_weights(table: ArrayLike | sparse.spmatrix) -> Graph:
    """Simetrizar una tabla de pesos cuadrada: a'_ij = (|a_ij| + |a_ji|)/2"""
    if sparse.issparse(table):
        matrix = sparse.coo_matrix(table)
    else:
        arr = np.asarray(table, dtype=np.float64)
        if arr.ndim != 2:
            raise GraphFormatError("La tabla de pesos debe ser bidimensional")
        matrix = sparse.coo_matrix(arr)
    n_rows, n_cols = matrix.shape
    if n_rows != n_cols:
        raise GraphFormatError(f"La tabla de pesos debe ser cuadrada: {n_rows} x {n_cols}")
    if n_rows == 0:
        raise GraphFormatError("Tabla de pesos vacía")

    absolute = sparse.coo_matrix((np.abs(matrix.data), (matrix.row, matrix.col)), shape=matrix.shape).tocsr()
    upper = sparse.triu((absolute + absolute.T) * 0.5, k=1).tocsr()
    upper.eliminate_zeros()
    upper = upper.tocoo()
    return Graph(n_rows, upper.row, upper.col, upper.data)
