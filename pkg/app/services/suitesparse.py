"""Cliente de descarga de la colección SuiteSparse con caché en disco."""
import logging
import os
import tarfile
import tempfile
from pathlib import Path
from typing import Optional

import httpx

from app.core.config import settings
from app.core.exceptions import CorruptArchiveError, FetchError, UnknownMatrixError
from app.models.graph import Graph
from app.services.graph_io import parse_matrix_market

logger = logging.getLogger(__name__)


def archive_path(group: str, name: str, cache_dir: Path) -> Path:
    return Path(cache_dir) / group / f"{name}.tar.gz"


def _download(url: str, target: Path, transport: Optional[httpx.BaseTransport]) -> None:
    """Descargar a un temporal del mismo directorio y renombrar de forma atómica"""
    target.parent.mkdir(parents=True, exist_ok=True)
    transport = transport or httpx.HTTPTransport(retries=settings.FETCH_RETRIES)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, suffix=".part")
    try:
        with os.fdopen(fd, "wb") as tmp, httpx.Client(
            transport=transport, timeout=settings.FETCH_TIMEOUT_SECONDS, follow_redirects=True
        ) as client:
            with client.stream("GET", url) as response:
                if response.status_code == 404:
                    raise UnknownMatrixError(f"Matriz no encontrada: {url}")
                if response.status_code >= 500:
                    raise FetchError(f"Error del servidor {response.status_code} en {url}", retryable=True)
                if response.status_code != 200:
                    raise FetchError(f"Respuesta inesperada {response.status_code} en {url}")
                expected = response.headers.get("Content-Length")
                for chunk in response.iter_bytes():
                    tmp.write(chunk)
                # Content-Length cuenta los bytes tal como llegan, antes de decodificar
                received = response.num_bytes_downloaded
        if expected is not None and int(expected) != received:
            raise CorruptArchiveError(f"Tamaño recibido {received} distinto del anunciado {expected}")
        os.replace(tmp_name, target)
    except httpx.TransportError as exc:
        raise FetchError(f"Fallo de red al descargar {url}: {exc}", retryable=True) from exc
    finally:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)


def _extract_matrix(archive: Path, group: str, name: str) -> str:
    member = settings.SUITESPARSE_MEMBER_TEMPLATE.format(group=group, name=name)
    try:
        with tarfile.open(archive, mode="r:gz") as tar:
            try:
                handle = tar.extractfile(member)
            except KeyError as exc:
                raise UnknownMatrixError(f"El archivo no contiene {member}") from exc
            if handle is None:
                raise CorruptArchiveError(f"{member} no es un archivo regular")
            return handle.read().decode()
    except (tarfile.TarError, EOFError, OSError) as exc:
        raise CorruptArchiveError(f"Archivo corrupto {archive}: {exc}") from exc


def fetch_suitesparse(
    group: str,
    name: str,
    cache_dir: Optional[Path] = None,
    transport: Optional[httpx.BaseTransport] = None,
) -> Graph:
    """Obtener un grafo de SuiteSparse, descargándolo solo si no está en caché"""
    cache_dir = Path(cache_dir or settings.CACHE_DIR)
    archive = archive_path(group, name, cache_dir)
    if archive.exists():
        logger.info(f"Caché encontrada para {group}/{name}")
    else:
        url = settings.SUITESPARSE_URL_TEMPLATE.format(group=group, name=name)
        logger.info(f"Descargando {url}")
        _download(url, archive, transport)
    try:
        text = _extract_matrix(archive, group, name)
    except CorruptArchiveError:
        # no dejar en caché un archivo que no se puede leer
        archive.unlink(missing_ok=True)
        raise
    return parse_matrix_market(text)
