"""Línea de comandos: layout, bench, fetch y serve.

Códigos de salida: 0 éxito, 1 argumentos inválidos, 2 entrada ilegible, 3 fallo numérico.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import FetchError, GraphFormatError, NumericalError, OutputError
from app.core.logging import setup_logging
from app.schemas.run import BenchSpec, GraphSource, InitMethod, MethodOptions, RunSpec, SolverKind
from app.services.bench import run_bench
from app.services.pipeline import load_graph, run_single
from app.services.suitesparse import fetch_suitesparse
from app.utils.output import bench_csv, positions_csv, render_svg, trace_csv, write_files, write_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


class ArgumentParser(argparse.ArgumentParser):
    """argparse con salida 1 ante argumentos inválidos"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_method_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("parámetros de los métodos")
    group.add_argument("--iters", type=int, help="iteraciones del solver final (por defecto 50 random, 45 cn/sa)")
    group.add_argument("--k", type=float, help="distancia ideal k (por defecto 1/√n)")
    group.add_argument("--eps-r", type=float, help="guarda de repulsión en unidades de k")
    group.add_argument("--t0", type=float, help="temperatura inicial de CN")
    group.add_argument("--cn-iters", type=int, help="iteraciones de CN y SA (por defecto ⌈2|V|³/|E|⌉)")
    group.add_argument("--fr-t0", type=float, help="temperatura inicial de FR")
    group.add_argument("--tol", type=float, help="tolerancia de convergencia")
    group.add_argument("--trace-every", type=int, default=settings.TRACE_EVERY, help="registrar f cada N iteraciones")
    group.add_argument("--no-timing", action="store_true", help="omitir tiempos para salidas reproducibles")
    group.add_argument("--unweighted", action="store_true", help="ignorar los pesos del grafo")


def _method_options(args: argparse.Namespace) -> MethodOptions:
    return MethodOptions(
        iters=args.iters,
        k=args.k,
        eps_r=args.eps_r,
        cn_t0=args.t0,
        cn_iters=args.cn_iters,
        fr_t0=args.fr_t0,
        tol=args.tol,
        trace_every=args.trace_every,
        timing=not args.no_timing,
    )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="fr-layout", description="Layout de grafos FR con colocación inicial CN")
    parser.add_argument("--log-level", default=None, help="nivel de logging (por defecto LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    layout = commands.add_parser("layout", help="calcular un layout y escribir SVG y traza CSV")
    source = layout.add_mutually_exclusive_group(required=True)
    source.add_argument("--gen", help="generador: cycle:N, btree:D o grouped[:n,grupos,aristas,w_in,w_out]")
    source.add_argument("--input", type=Path, help="archivo Matrix Market (.mtx) o lista de aristas")
    source.add_argument("--suitesparse", help="matriz de SuiteSparse GRUPO/NOMBRE")
    layout.add_argument("--init", choices=[m.value for m in InitMethod], default=InitMethod.CN.value)
    layout.add_argument("--solver", choices=[s.value for s in SolverKind], default=SolverKind.LBFGS.value)
    layout.add_argument("--seed", type=int, default=0)
    layout.add_argument("--svg", type=Path, help="ruta del SVG (por defecto OUT/layout.svg)")
    layout.add_argument("--trace", type=Path, help="ruta del CSV de traza (por defecto OUT/trace.csv)")
    layout.add_argument("--out", type=Path, default=Path("."), help="directorio de salida")
    _add_method_options(layout)

    bench = commands.add_parser("bench", help="comparar inicializaciones y solvers sobre varias semillas")
    bench.add_argument("--gen", action="append", default=[], help="generador (repetible)")
    bench.add_argument("--input", type=Path, action="append", default=[], help="archivo de grafo (repetible)")
    bench.add_argument("--suitesparse", action="append", default=[], help="GRUPO/NOMBRE (repetible)")
    bench.add_argument("--inits", nargs="+", choices=[m.value for m in InitMethod], default=["random", "cn"])
    bench.add_argument("--solvers", nargs="+", choices=[s.value for s in SolverKind], default=["fr", "lbfgs"])
    bench.add_argument("--seeds", nargs="+", type=int, default=[0])
    bench.add_argument("--workers", type=int, default=settings.BENCH_WORKERS)
    bench.add_argument("--out", type=Path, help="CSV de resumen (por defecto stdout)")
    _add_method_options(bench)

    fetch = commands.add_parser("fetch", help="descargar matrices de SuiteSparse a la caché")
    fetch.add_argument("names", nargs="+", help="GRUPO/NOMBRE")
    fetch.add_argument("--cache-dir", type=Path, default=None)

    serve = commands.add_parser("serve", help="arrancar el servicio HTTP")
    serve.add_argument("--host", default=settings.API_HOST)
    serve.add_argument("--port", type=int, default=settings.API_PORT)
    return parser


def cmd_layout(args: argparse.Namespace) -> int:
    spec = RunSpec(
        source=GraphSource(
            input_file=args.input, generator=args.gen, suitesparse=args.suitesparse, unweighted=args.unweighted
        ),
        init=args.init,
        solver=args.solver,
        seeds=[args.seed],
        options=_method_options(args),
        svg=args.svg or args.out / "layout.svg",
        trace=args.trace or args.out / "trace.csv",
        out=args.out,
    )
    graph = load_graph(spec.source)
    result = run_single(graph, spec.init, spec.solver, spec.seeds[0], spec.options)
    # solo se escribe cuando la ejecución terminó bien, y todo de una vez
    outputs = {
        spec.svg: render_svg(graph, result.layout),
        spec.trace: trace_csv(result.trace, timing=spec.options.timing),
    }
    if args.svg is None and args.trace is None:
        outputs[spec.out / "positions.csv"] = positions_csv(result.layout)
    write_files(outputs)
    print(
        f"{spec.source.label}: {spec.init.value}+{spec.solver.value} semilla {spec.seeds[0]} "
        f"f={result.final_energy:.10g} ({result.trace.termination.value}, {result.trace.iterations} iteraciones)"
    )
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    unweighted = args.unweighted
    sources = (
        [GraphSource(generator=gen, unweighted=unweighted) for gen in args.gen]
        + [GraphSource(input_file=path, unweighted=unweighted) for path in args.input]
        + [GraphSource(suitesparse=name, unweighted=unweighted) for name in args.suitesparse]
    )
    spec = BenchSpec(
        sources=sources,
        inits=args.inits,
        solvers=args.solvers,
        seeds=args.seeds,
        options=_method_options(args),
        workers=args.workers,
    )
    content = bench_csv(run_bench(spec), timing=spec.options.timing)
    if args.out is not None:
        write_text(args.out, content)
    else:
        sys.stdout.write(content)
    return EXIT_OK


def cmd_fetch(args: argparse.Namespace) -> int:
    status = EXIT_OK
    for full_name in args.names:
        group, sep, name = full_name.partition("/")
        if not sep or not group or not name:
            print(f"{full_name}: se esperaba GRUPO/NOMBRE", file=sys.stderr)
            status = EXIT_INPUT
            continue
        try:
            graph = fetch_suitesparse(group, name, cache_dir=args.cache_dir)
        except (FetchError, GraphFormatError, OSError) as exc:
            print(f"{full_name}: error: {exc}", file=sys.stderr)
            status = EXIT_INPUT
            continue
        print(f"{full_name}: n={graph.n}, |E|={graph.num_edges}, sparsity={100 * graph.sparsity:.3f}%")
    return status


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, reload=settings.DEBUG, log_level="info")
    return EXIT_OK


COMMANDS = {"layout": cmd_layout, "bench": cmd_bench, "fetch": cmd_fetch, "serve": cmd_serve}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: argumentos inválidos: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutputError as exc:
        print(f"error: no se pudo escribir la salida: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, GraphFormatError, FetchError) as exc:
        print(f"error: no se pudo leer la entrada: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"error numérico en la iteración {exc.iteration}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception:
        logger.error("Error no manejado", exc_info=True)
        raise


if __name__ == "__main__":
    sys.exit(main())
