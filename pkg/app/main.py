from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
import uvicorn
import logging

from app.core.config import settings
from app.core.logging import setup_logging
from app.routers import bench, graphs, layouts

# Configurar logging
setup_logging()
logger = logging.getLogger(__name__)

# Crear aplicación FastAPI
app = FastAPI(
    title="API de Layout de Grafos FR",
    description="Layout de grafos Fruchterman–Reingold con colocación inicial por Newton coordenado",
    version="1.0.0",
    docs_url="/docs",
    redoc_url="/redoc"
)

# Configurar CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Incluir routers
app.include_router(layouts.router, prefix="/layouts", tags=["Layouts"])
app.include_router(bench.router, prefix="/bench", tags=["Benchmark"])
app.include_router(graphs.router, prefix="/graphs", tags=["Grafos"])

@app.get("/", tags=["Root"])
async def root():
    """Endpoint raíz de la API"""
    return {
        "message": "API de Layout de Grafos FR",
        "version": "1.0.0",
        "docs": "/docs",
        "inits": ["random", "sa", "cn"],
        "solvers": ["fr", "lbfgs"],
    }

@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """Manejador global de excepciones"""
    logger.error(f"Error no manejado: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content={"detail": "Error interno del servidor"}
    )

if __name__ == "__main__":
    uvicorn.run(
        "app.main:app",
        host=settings.API_HOST,
        port=settings.API_PORT,
        reload=settings.DEBUG,
        log_level="info"
    )
