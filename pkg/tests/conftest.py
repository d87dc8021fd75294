import io
import itertools
import math
import os
import tarfile

import httpx
import numpy as np
import pytest
import pytest_asyncio
from httpx import AsyncClient, ASGITransport

# Configurar variables de entorno para tests
os.environ["LOG_LEVEL"] = "WARNING"
os.environ["DEBUG"] = "False"

from app.core.config import settings
from app.main import app
from app.models.graph import Graph
from app.models.lattice import CirclePerm
from app.routers.errors import get_transport
from app.schemas.params import ForceParams
from app.services.graph_ops import cycle_graph
from app.services.sa_placement import objective_pairs, sa_objective

MATRIX_MARKET_PATH = """%%MatrixMarket matrix coordinate pattern symmetric
% camino de 4 vértices
4 4 3
2 1
3 2
4 3
"""


def network_enabled() -> bool:
    return os.environ.get("FR_LAYOUT_NETWORK") == "1"


def pytest_collection_modifyitems(config, items):
    """Saltar los tests de red salvo con FR_LAYOUT_NETWORK=1"""
    if network_enabled():
        return
    skip = pytest.mark.skip(reason="requiere FR_LAYOUT_NETWORK=1")
    for item in items:
        if "network" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def two_vertices():
    """Dos vértices unidos por una arista de peso 1"""
    return Graph.from_edges(2, [(0, 1, 1.0)])


@pytest.fixture
def path3():
    """Camino 1–2–3"""
    return Graph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])


@pytest.fixture
def triangle():
    """Triángulo K3"""
    return Graph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def cycle4():
    return cycle_graph(4)


@pytest.fixture
def two_edges():
    """Dos aristas disjuntas: dos componentes"""
    return Graph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)])


@pytest.fixture
def hessian_example():
    """Configuración de 4 vértices con k = 1/2: E = {1-2, 2-3, 2-4}"""
    graph = Graph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0)])
    X = np.array([[1.0, 0.0], [0.0, 0.0], [0.9, 0.1], [0.9, -0.1]])
    params = ForceParams(k=0.5, eps_r=0.0)
    return graph, X, params


@pytest.fixture
def unit_params():
    """k = 1 sin guarda de repulsión"""
    return ForceParams(k=1.0, eps_r=0.0)


def make_random_graph(rng: np.random.Generator, n: int, p: float = 0.4, weighted: bool = True) -> Graph:
    """Grafo aleatorio con al menos una arista"""
    edges = [
        (i, j, float(rng.uniform(0.5, 2.0)) if weighted else 1.0)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    if not edges:
        edges = [(0, 1, 1.0)]
    return Graph.from_edges(n, edges)


@pytest.fixture
def random_graph_factory():
    return make_random_graph


EXHAUSTIVE_LIMIT = 9


def exhaustive_optimum(graph: Graph) -> tuple[CirclePerm, float]:
    """Mínimo exacto del objetivo del recocido por enumeración (n ≤ 9)"""
    if graph.n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"Enumeración limitada a n ≤ {EXHAUSTIVE_LIMIT}")
    pairs = objective_pairs(graph)
    best_value, best_perm = math.inf, None
    # vértice 0 fijo: el objetivo es invariante por rotación
    for rest in itertools.permutations(range(1, graph.n)):
        perm = CirclePerm([0, *rest])
        value = sa_objective(graph, pairs, perm)
        if value < best_value:
            best_value, best_perm = value, perm
    return best_perm, best_value


@pytest.fixture
def sa_exhaustive():
    """Oráculo exacto del recocido para grafos pequeños"""
    return exhaustive_optimum


def make_archive(name: str, matrix_text: str) -> bytes:
    """Archivo .tar.gz con <name>/<name>.mtx"""
    buffer = io.BytesIO()
    data = matrix_text.encode()
    with tarfile.open(fileobj=buffer, mode="w:gz") as tar:
        info = tarfile.TarInfo(f"{name}/{name}.mtx")
        info.size = len(data)
        tar.addfile(info, io.BytesIO(data))
    return buffer.getvalue()


class FakeSuiteSparse:
    """Servidor SuiteSparse en memoria para httpx.MockTransport"""

    def __init__(self):
        self.archives = {("Test", "path4"): make_archive("path4", MATRIX_MARKET_PATH)}
        self.requests: list[str] = []

    def handler(self, request: httpx.Request) -> httpx.Response:
        self.requests.append(str(request.url))
        parts = request.url.path.strip("/").split("/")
        group, name = parts[-2], parts[-1].removesuffix(".tar.gz")
        body = self.archives.get((group, name))
        if body is None:
            return httpx.Response(404, text="not found")
        return httpx.Response(200, content=body)

    @property
    def transport(self) -> httpx.MockTransport:
        return httpx.MockTransport(self.handler)


@pytest.fixture
def fake_suitesparse():
    return FakeSuiteSparse()


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    """Caché temporal de SuiteSparse"""
    path = tmp_path / "cache"
    monkeypatch.setattr(settings, "CACHE_DIR", path)
    return path


@pytest_asyncio.fixture
async def async_client(fake_suitesparse, cache_dir):
    """Cliente HTTP async para tests"""
    app.dependency_overrides[get_transport] = lambda: fake_suitesparse.transport
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as ac:
        yield ac
    app.dependency_overrides.clear()
