from fastapi import APIRouter, Depends, HTTPException
from starlette.concurrency import run_in_threadpool

from app.core.exceptions import LayoutError
from app.schemas.run import GraphSource, LayoutRequest, LayoutResponse, TraceRecordResponse
from app.services.graph_io import parse_edge_list
from app.services.pipeline import load_graph, run_single
from app.routers.errors import get_transport, to_http_exception

router = APIRouter()


def _compute_layout(request: LayoutRequest, transport) -> LayoutResponse:
    if request.edge_list is not None:
        graph = parse_edge_list(request.edge_list)
        if request.unweighted:
            graph = graph.binarized()
    else:
        source = GraphSource(
            generator=request.generator, suitesparse=request.suitesparse, unweighted=request.unweighted
        )
        graph = load_graph(source, transport=transport)
    result = run_single(graph, request.init, request.solver, request.seed, request.options)
    return LayoutResponse(
        n=graph.n,
        num_edges=graph.num_edges,
        positions=result.layout.tolist(),
        termination=result.trace.termination.value,
        iterations=result.trace.iterations,
        final_energy=result.final_energy,
        trace=[
            TraceRecordResponse(iteration=rec.iteration, energy=rec.energy, elapsed_ms=rec.elapsed_ms)
            for rec in result.trace.records
        ],
    )


@router.post("/", response_model=LayoutResponse)
async def create_layout(request: LayoutRequest, transport=Depends(get_transport)):
    """Calcular un layout: colocación inicial y solver final para una semilla"""
    try:
        return await run_in_threadpool(_compute_layout, request, transport)
    except HTTPException:
        raise
    except (LayoutError, ValueError) as e:
        raise to_http_exception(e, "calcular el layout")
