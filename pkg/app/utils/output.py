"""Emisores de salida: layout en SVG 1.1 y trazas/resúmenes en CSV."""
import csv
import io
import os
import tempfile
from pathlib import Path
from collections.abc import Iterable, Mapping

import numpy as np
from matplotlib import colormaps
from matplotlib.colors import to_hex

from app.core.exceptions import OutputError
from app.models.graph import Graph
from app.models.layout import Layout, as_layout
from app.models.trace import Trace
from app.schemas.run import BenchRow

COLORMAP = "viridis"
MARGIN = 0.05
TRACE_HEADER = ["iter", "f", "elapsed_ms"]
BENCH_HEADER = [
    "graph", "init", "solver", "runs", "mean_f", "min_f", "max_f", "mean_elapsed_ms",
    "diff_vs_random", "diff_vs_sa", "separation", "status", "error",
]


class SvgBuilder:
    def __init__(self):
        self.svg = ""

    def header(self, min_x: float, min_y: float, width: float, height: float):
        self.svg += f"""<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg version="1.1" width="800" height="{800 * height / width:.0f}" viewBox="{min_x:.6g} {min_y:.6g} {width:.6g} {height:.6g}" xmlns="http://www.w3.org/2000/svg">
"""

    def group_start(self, attrs: dict):
        self.svg += "<g " + " ".join(f'{key}="{value}"' for key, value in attrs.items()) + ">\n"

    def group_end(self):
        self.svg += "</g>\n"

    def line(self, x1: float, y1: float, x2: float, y2: float):
        self.svg += f'<line x1="{x1:.6g}" y1="{y1:.6g}" x2="{x2:.6g}" y2="{y2:.6g}"/>\n'

    def circle(self, cx: float, cy: float, r: float, fill: str):
        self.svg += f'<circle cx="{cx:.6g}" cy="{cy:.6g}" r="{r:.6g}" fill="{fill}"/>\n'

    def get_svg(self) -> str:
        return f"{self.svg}</svg>\n"


def vertex_colors(n: int) -> list[str]:
    """Gradiente continuo por índice de vértice"""
    cmap = colormaps[COLORMAP]
    return [to_hex(cmap(i / max(n - 1, 1))) for i in range(n)]


def render_svg(graph: Graph, X: Layout) -> str:
    """Aristas como líneas y vértices como círculos, encuadre a la caja con 5% de margen"""
    X = as_layout(X, graph.n)
    lo, hi = X.min(axis=0), X.max(axis=0)
    extent = float(max(hi - lo)) or 1.0
    margin = MARGIN * extent
    width = float(hi[0] - lo[0]) + 2 * margin
    height = float(hi[1] - lo[1]) + 2 * margin
    radius = 0.004 * extent + 1e-12

    svg = SvgBuilder()
    svg.header(float(lo[0]) - margin, float(lo[1]) - margin, width, height)
    svg.group_start({"stroke": "#999999", "stroke-width": f"{radius / 2:.6g}", "stroke-opacity": "0.6"})
    for i, j in zip(graph.src.tolist(), graph.dst.tolist()):
        svg.line(X[i, 0], X[i, 1], X[j, 0], X[j, 1])
    svg.group_end()
    svg.group_start({"stroke": "none"})
    for (x, y), color in zip(X.tolist(), vertex_colors(graph.n)):
        svg.circle(x, y, radius, color)
    svg.group_end()
    return svg.get_svg()


def trace_csv(trace: Trace, timing: bool = True) -> str:
    """CSV 'iter,f,elapsed_ms'; sin la columna de tiempo si timing es False"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRACE_HEADER if timing else TRACE_HEADER[:2])
    for rec in trace.records:
        row = [rec.iteration, repr(rec.energy)]
        if timing:
            row.append(f"{rec.elapsed_ms:.3f}")
        writer.writerow(row)
    return buffer.getvalue()


def bench_csv(rows: Iterable[BenchRow], timing: bool = True) -> str:
    header = BENCH_HEADER if timing else [col for col in BENCH_HEADER if col != "mean_elapsed_ms"]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        data = row.model_dump(mode="json")
        writer.writerow({key: "" if data[key] is None else data[key] for key in header})
    return buffer.getvalue()


def positions_csv(X: Layout) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["vertex", "x", "y"])
    for i, (x, y) in enumerate(np.asarray(X).tolist(), start=1):
        writer.writerow([i, repr(x), repr(y)])
    return buffer.getvalue()


def write_files(outputs: Mapping[Path, str]) -> None:
    """Escribir varios archivos como un todo: primero temporales, luego os.replace de cada uno.

    Si falla la escritura de cualquier temporal no se toca ningún destino.
    """
    staged: list[tuple[str, Path]] = []
    try:
        for path, content in outputs.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            staged.append((tmp_name, path))
            with os.fdopen(fd, "w", newline="") as tmp:
                tmp.write(content)
        for tmp_name, path in staged:
            os.replace(tmp_name, path)
    except OSError as exc:
        raise OutputError(f"No se pudo escribir {exc.filename or 'la salida'}: {exc.strerror or exc}") from exc
    finally:
        for tmp_name, _ in staged:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)


def write_text(path: Path, content: str) -> None:
    """Escritura atómica de un solo archivo"""
    write_files({Path(path): content})
