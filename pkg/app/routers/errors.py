import logging
from typing import Optional

import httpx
from fastapi import HTTPException, status

from app.core.exceptions import FetchError, GraphFormatError, NumericalError, UnknownMatrixError

logger = logging.getLogger(__name__)


def get_transport() -> Optional[httpx.BaseTransport]:
    """Transporte HTTP para SuiteSparse; None usa el de red (los tests lo sustituyen)"""
    return None


def to_http_exception(exc: Exception, action: str) -> HTTPException:
    """Traducir errores del dominio a respuestas HTTP"""
    if isinstance(exc, UnknownMatrixError):
        code = status.HTTP_404_NOT_FOUND
    elif isinstance(exc, FetchError):
        code = status.HTTP_502_BAD_GATEWAY
    elif isinstance(exc, NumericalError):
        code = status.HTTP_422_UNPROCESSABLE_ENTITY
    elif isinstance(exc, (GraphFormatError, ValueError)):
        code = status.HTTP_400_BAD_REQUEST
    else:
        raise exc
    logger.warning(f"Error al {action}: {exc}")
    return HTTPException(status_code=code, detail=f"Error al {action}: {exc}")
