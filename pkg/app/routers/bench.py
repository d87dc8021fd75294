from fastapi import APIRouter, HTTPException
from starlette.concurrency import run_in_threadpool

from app.core.exceptions import LayoutError
from app.schemas.run import BenchRequest, BenchResponse, BenchSpec, GraphSource
from app.services.bench import run_bench
from app.routers.errors import to_http_exception

router = APIRouter()


@router.post("/", response_model=BenchResponse)
async def create_bench(request: BenchRequest):
    """Ejecutar una matriz de benchmark sobre grafos generados"""
    try:
        spec = BenchSpec(
            sources=[GraphSource(generator=gen, unweighted=request.unweighted) for gen in request.generators],
            inits=request.inits,
            solvers=request.solvers,
            seeds=request.seeds,
            options=request.options,
        )
        rows = await run_in_threadpool(run_bench, spec)
        return BenchResponse(rows=rows)
    except HTTPException:
        raise
    except (LayoutError, ValueError) as e:
        raise to_http_exception(e, "ejecutar el benchmark")
