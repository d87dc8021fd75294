from fastapi import APIRouter, Depends, HTTPException
from starlette.concurrency import run_in_threadpool

from app.core.exceptions import LayoutError
from app.schemas.run import GraphSummary
from app.services.suitesparse import fetch_suitesparse
from app.routers.errors import get_transport, to_http_exception

router = APIRouter()


@router.get("/{group}/{name}", response_model=GraphSummary)
async def get_graph(group: str, name: str, transport=Depends(get_transport)):
    """Descargar (o leer de la caché) una matriz de SuiteSparse y resumirla"""
    try:
        graph = await run_in_threadpool(fetch_suitesparse, group, name, None, transport)
        return GraphSummary(name=f"{group}/{name}", n=graph.n, num_edges=graph.num_edges, sparsity=graph.sparsity)
    except HTTPException:
        raise
    except (LayoutError, ValueError) as e:
        raise to_http_exception(e, f"obtener {group}/{name}")
