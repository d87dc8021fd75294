import numpy as np
import pytest

from app.schemas.run import BenchSpec, GraphSource, InitMethod, MethodOptions, SolverKind
from app.services.bench import CellResult, group_separation_ratio, run_bench, summarize
from app.services.pipeline import (
    DEFAULT_BUDGETS,
    load_graph,
    pipeline,
    random_placement,
    run_single,
    solver_config,
)


FAST = MethodOptions(iters=5, cn_iters=200, timing=False)


class TestPipeline:
    """Tests de la matriz de experimentos"""

    def test_random_placement(self):
        X = random_placement(10, seed=3)
        assert X.shape == (10, 2)
        assert ((X >= 0) & (X < 1)).all()
        assert np.array_equal(X, random_placement(10, seed=3))

    def test_budgets(self):
        assert solver_config(InitMethod.RANDOM, MethodOptions()).n_iter == DEFAULT_BUDGETS[InitMethod.RANDOM] == 50
        assert solver_config(InitMethod.CN, MethodOptions()).n_iter == 45
        assert solver_config(InitMethod.SA, MethodOptions(iters=7)).n_iter == 7

    def test_load_graph_from_files(self, tmp_path):
        """Test lectura por extensión o cabecera, y binarización"""
        mtx = tmp_path / "path4.mtx"
        mtx.write_text("%%MatrixMarket matrix coordinate pattern symmetric\n4 4 3\n2 1\n3 2\n4 3\n")
        assert load_graph(GraphSource(input_file=mtx)).num_edges == 3
        edges = tmp_path / "g.txt"
        edges.write_text("1 2 0.5\n2 3 2.0\n")
        assert load_graph(GraphSource(input_file=edges)).weight.tolist() == [0.5, 2.0]
        assert load_graph(GraphSource(input_file=edges, unweighted=True)).weight.tolist() == [1.0, 1.0]
        with pytest.raises(OSError):
            load_graph(GraphSource(input_file=tmp_path / "missing.txt"))

    @pytest.mark.parametrize("init", list(InitMethod))
    @pytest.mark.parametrize("solver", list(SolverKind))
    def test_run_single(self, init, solver):
        graph = load_graph(GraphSource(generator="cycle:12"))
        result = run_single(graph, init, solver, seed=1, options=FAST)
        assert result.layout.shape == (12, 2)
        assert np.isfinite(result.final_energy)
        assert result.trace.records[0].iteration == 0
        assert result.init_ms == result.solve_ms == 0.0

    def test_pipeline_seeds(self):
        graph = load_graph(GraphSource(generator="cycle:8"))
        results = pipeline(graph, InitMethod.CN, SolverKind.LBFGS, [2, 0], FAST)
        assert [r.seed for r in results] == [2, 0]
        again = pipeline(graph, InitMethod.CN, SolverKind.LBFGS, [2], FAST)
        assert np.array_equal(again[0].layout, results[0].layout)
        with pytest.raises(ValueError):
            pipeline(graph, InitMethod.CN, SolverKind.LBFGS, [], FAST)


class TestSeparationRatio:
    """Tests del cociente de separación de grupos"""

    def test_two_clusters(self):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
        ratio = group_separation_ratio(X, np.array([0, 0, 1, 1]))
        inter = (10.0 * 2 + np.sqrt(101.0) * 2) / 4
        assert ratio == pytest.approx(inter / 1.0)

    def test_needs_both_kinds_of_pairs(self):
        X = np.zeros((3, 2)) + np.arange(3)[:, None]
        with pytest.raises(ValueError):
            group_separation_ratio(X, np.array([0, 0, 0]))
        with pytest.raises(ValueError):
            group_separation_ratio(X, np.array([0, 1, 2]))


class TestSummarize:
    """Tests del resumen del benchmark"""

    def test_canonical_order_and_paired_differences(self):
        cells = [
            CellResult(0, InitMethod.CN, SolverKind.FR, 1, final_energy=1.0, elapsed_ms=1.0),
            CellResult(0, InitMethod.RANDOM, SolverKind.FR, 1, final_energy=4.0, elapsed_ms=1.0),
            CellResult(0, InitMethod.SA, SolverKind.FR, 1, final_energy=2.0, elapsed_ms=1.0),
            CellResult(0, InitMethod.CN, SolverKind.FR, 0, final_energy=3.0, elapsed_ms=3.0),
            CellResult(0, InitMethod.RANDOM, SolverKind.FR, 0, final_energy=5.0, elapsed_ms=1.0),
        ]
        rows = summarize(["g"], cells)
        assert [(r.init, r.solver) for r in rows] == [
            (InitMethod.CN, SolverKind.FR), (InitMethod.RANDOM, SolverKind.FR), (InitMethod.SA, SolverKind.FR),
        ]
        cn = rows[0]
        assert (cn.runs, cn.mean_f, cn.min_f, cn.max_f, cn.mean_elapsed_ms) == (2, 2.0, 1.0, 3.0, 2.0)
        assert cn.diff_vs_random == pytest.approx(-2.5)
        assert cn.diff_vs_sa == pytest.approx(-1.0)
        assert rows[1].diff_vs_random is None
        assert rows[2].diff_vs_sa is None

    def test_failed_runs_are_reported(self):
        cells = [
            CellResult(0, InitMethod.CN, SolverKind.LBFGS, 0, error="NumericalError: boom"),
            CellResult(0, InitMethod.CN, SolverKind.LBFGS, 1, final_energy=1.0, elapsed_ms=0.0),
        ]
        (row,) = summarize(["g"], cells)
        assert row.runs == 1
        assert row.status == "error"
        assert row.error == "NumericalError: boom"


class TestRunBench:
    """Tests de la ejecución completa del benchmark"""

    def test_single_method_gives_one_row(self):
        spec = BenchSpec(
            sources=[GraphSource(generator="cycle:10")],
            inits=[InitMethod.CN], solvers=[SolverKind.FR], seeds=[0, 1], options=FAST,
        )
        (row,) = run_bench(spec)
        assert row.runs == 2
        assert row.status == "ok"

    def test_grouped_graph_reports_separation(self):
        spec = BenchSpec(
            sources=[GraphSource(generator="grouped")],
            inits=[InitMethod.RANDOM], solvers=[SolverKind.LBFGS], seeds=[0], options=FAST,
        )
        (row,) = run_bench(spec)
        assert row.separation is not None and row.separation > 0

    def test_unloadable_graph_becomes_error_row(self, tmp_path):
        spec = BenchSpec(
            sources=[GraphSource(input_file=tmp_path / "missing.txt"), GraphSource(generator="cycle:6")],
            inits=[InitMethod.RANDOM], solvers=[SolverKind.FR], options=FAST,
        )
        rows = run_bench(spec)
        assert [r.status for r in rows] == ["error", "ok"]
        assert rows[0].runs == 0
