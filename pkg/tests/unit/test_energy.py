import math

import numpy as np
import pytest

from app.models.graph import Graph
from app.schemas.params import ForceParams, GravityConfig
from app.services.energy import (
    attr_gradient,
    attr_hessian,
    attr_local_model,
    attractive_energy,
    default_k,
    energy_gradient,
    gravity_active,
    gravity_energy_and_gradient,
    objective_and_gradient,
    optimal_scale,
    pair_energy,
    scale_layout,
    scaling_derivative,
    scaling_potential,
    total_energy,
    vertex_gradient,
    vertex_hessian,
)
from app.services.graph_ops import connected_components


def random_instance(rng, random_graph_factory, eps_r=0.0):
    n = int(rng.integers(2, 21))
    graph = random_graph_factory(rng, n, p=float(rng.uniform(0.1, 0.6)))
    X = rng.random((n, 2))
    params = ForceParams(k=default_k(n), eps_r=eps_r)
    return graph, X, params


def restricted(fn, X, i):
    """f como función de x_i únicamente"""
    def inner(point):
        Y = X.copy()
        Y[i] = point
        return fn(Y)
    return inner


def central_gradient(fn, point, h):
    grad = np.zeros(2)
    for axis in range(2):
        step = np.zeros(2)
        step[axis] = h
        grad[axis] = (fn(point + step) - fn(point - step)) / (2 * h)
    return grad


def central_jacobian(fn, point, h):
    jac = np.zeros((2, 2))
    for axis in range(2):
        step = np.zeros(2)
        step[axis] = h
        jac[:, axis] = (fn(point + step) - fn(point - step)) / (2 * h)
    return jac


def relative_error(approx, exact):
    return np.linalg.norm(approx - exact) / max(np.linalg.norm(exact), 1.0)


class TestPairAndTotalEnergy:
    """Tests de energía por par y total"""

    @pytest.mark.parametrize("n, expected", [(4, 0.5), (1, 1.0), (100, 0.1)])
    def test_default_k(self, n, expected):
        assert default_k(n) == pytest.approx(expected)

    def test_params_for_graph_equal_explicit_k(self):
        """Test los parámetros por defecto equivalen a indicar k = 1/√n"""
        assert ForceParams.for_graph(4) == ForceParams(k=0.5)
        assert ForceParams.for_graph(4, eps_r=0.0) == ForceParams(k=0.5, eps_r=0.0)

    def test_pair_energy_examples(self, unit_params):
        assert pair_energy(1.0, 1.0, unit_params) == pytest.approx(1 / 3)
        assert pair_energy(1.0, 0.0, unit_params) == 0.0
        assert pair_energy(0.0, 1.0, unit_params) == math.inf
        with pytest.raises(ValueError):
            pair_energy(-1.0, 1.0, unit_params)

    def test_pair_energy_with_guard_is_finite(self):
        params = ForceParams(k=1.0, eps_r=0.01)
        assert pair_energy(0.0, 1.0, params) == pytest.approx(-math.log(0.01))

    def test_total_energy_examples(self, two_vertices, triangle, unit_params):
        assert total_energy(two_vertices, np.array([[0.0, 0.0], [1.0, 0.0]]), unit_params) == pytest.approx(1 / 3)
        X = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
        assert total_energy(triangle, X, unit_params) == pytest.approx(1.0)

    def test_coincident_pair_is_infinite(self, path3, unit_params):
        X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
        assert total_energy(path3, X, unit_params) == math.inf
        assert math.isfinite(total_energy(path3, X, unit_params, clamp=1e-9))

    def test_size_mismatch(self, path3, unit_params):
        with pytest.raises(ValueError):
            total_energy(path3, np.zeros((2, 2)), unit_params)

    def test_translation_and_rotation_invariance(self, random_graph_factory):
        """Test f solo depende de las distancias"""
        rng = np.random.default_rng(5)
        graph, X, params = random_instance(rng, random_graph_factory)
        base = total_energy(graph, X, params)
        theta = 0.7
        rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        assert total_energy(graph, X + np.array([3.0, -2.0]), params) == pytest.approx(base, rel=1e-12, abs=1e-12)
        assert total_energy(graph, X @ rot.T, params) == pytest.approx(base, rel=1e-12, abs=1e-12)

    def test_block_accumulation_matches_single_block(self, random_graph_factory, monkeypatch):
        """Test el resultado no depende del tamaño de bloque"""
        import app.services.energy as energy

        rng = np.random.default_rng(9)
        graph, X, params = random_instance(rng, random_graph_factory, eps_r=0.01)
        whole = total_energy(graph, X, params)
        grad = energy_gradient(graph, X, params)
        monkeypatch.setattr(energy, "BLOCK_PAIRS", 1)
        assert total_energy(graph, X, params) == pytest.approx(whole, rel=1e-12)
        assert np.allclose(energy_gradient(graph, X, params), grad, rtol=1e-12, atol=1e-12)


class TestVertexDerivatives:
    """Tests de gradiente y hessiana por vértice"""

    def test_equilibrium_distance(self):
        """Test gradiente nulo a distancia k/∛a"""
        graph = Graph.from_edges(2, [(0, 1, 8.0)])
        params = ForceParams(k=1.0, eps_r=0.0)
        X = np.array([[0.0, 0.0], [0.5, 0.0]])
        assert np.allclose(vertex_gradient(graph, X, 0, params), 0.0, atol=1e-12)

    def test_symmetric_star(self):
        """Test centro de una estrella simétrica"""
        graph = Graph.from_edges(5, [(0, j, 1.0) for j in range(1, 5)])
        X = np.array([[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        assert np.allclose(vertex_gradient(graph, X, 0, ForceParams(k=0.7, eps_r=0.0)), 0.0, atol=1e-12)

    def test_golden_hessian(self, hessian_example):
        """Test hessiana de la configuración de 4 vértices: diag(4.25, 1.75)"""
        graph, X, params = hessian_example
        H = vertex_hessian(graph, X, 0, params)
        assert np.allclose(H, [[4.25, 0.0], [0.0, 1.75]], rtol=0, atol=1e-12)

    def test_axis_aligned_pair_has_zero_off_diagonal(self, two_vertices, unit_params):
        H = vertex_hessian(two_vertices, np.array([[0.0, 0.0], [2.0, 0.0]]), 0, unit_params)
        assert H[0, 1] == 0.0
        assert H[1, 0] == 0.0

    def test_coincident_pair_is_error(self, two_vertices, unit_params):
        with pytest.raises(ValueError):
            vertex_gradient(two_vertices, np.zeros((2, 2)), 0, unit_params)

    def test_coincident_pair_with_guard_is_finite(self, path3):
        """Test con eps_r > 0 un par coincidente no aporta término y todo queda finito"""
        params = ForceParams.for_graph(3)
        X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
        grad = energy_gradient(path3, X, params)
        assert np.isfinite(grad).all()
        for i in range(3):
            assert np.isfinite(vertex_gradient(path3, X, i, params)).all()
            assert np.isfinite(vertex_hessian(path3, X, i, params)).all()
            assert np.allclose(grad[i], vertex_gradient(path3, X, i, params), rtol=1e-10, atol=1e-12)
        # Sin el vértice 1, el 0 solo siente la repulsión del 2
        k, eps = params.k, params.eps
        assert grad[0] == pytest.approx([k**2 / (1.0 + eps), 0.0])

    @pytest.mark.parametrize("eps_r", [0.0, 0.01])
    def test_gradient_and_hessian_match_finite_differences(self, random_graph_factory, eps_r):
        """Test derivadas contra diferencias centradas en instancias aleatorias"""
        rng = np.random.default_rng(21)
        for _ in range(100):
            graph, X, params = random_instance(rng, random_graph_factory, eps_r)
            i = int(rng.integers(graph.n))
            h = 1e-6
            fd_grad = central_gradient(restricted(lambda Y: total_energy(graph, Y, params), X, i), X[i], h)
            grad = vertex_gradient(graph, X, i, params)
            assert relative_error(fd_grad, grad) < 1e-5

            fd_hess = central_jacobian(restricted(lambda Y: vertex_gradient(graph, Y, i, params), X, i), X[i], h)
            hess = vertex_hessian(graph, X, i, params)
            assert relative_error(fd_hess, hess) < 1e-4
            assert np.allclose(hess, hess.T)

    def test_full_gradient_rows(self, random_graph_factory):
        """Test cada fila del gradiente completo es ∇f_i"""
        rng = np.random.default_rng(2)
        graph, X, params = random_instance(rng, random_graph_factory, eps_r=0.01)
        grad = energy_gradient(graph, X, params)
        for i in range(graph.n):
            assert np.allclose(grad[i], vertex_gradient(graph, X, i, params), rtol=1e-10, atol=1e-12)


class TestAttractiveDerivatives:
    """Tests del modelo atractivo f^a_i"""

    def test_single_neighbor(self, two_vertices, unit_params):
        X = np.array([[1.0, 0.0], [0.0, 0.0]])
        assert np.allclose(attr_gradient(two_vertices, X, 0, unit_params), [1.0, 0.0])
        assert np.allclose(attr_hessian(two_vertices, X, 0, unit_params), [[2.0, 0.0], [0.0, 1.0]])

    def test_no_neighbors_and_coincident(self, unit_params):
        graph = Graph.from_edges(3, [(1, 2, 1.0)])
        X = np.array([[0.3, 0.3], [1.0, 1.0], [1.0, 1.0]])
        assert np.array_equal(attr_gradient(graph, X, 0, unit_params), np.zeros(2))
        assert np.array_equal(attr_hessian(graph, X, 0, unit_params), np.zeros((2, 2)))
        assert np.array_equal(attr_gradient(graph, X, 1, unit_params), np.zeros(2))

    def test_match_finite_differences(self, random_graph_factory):
        rng = np.random.default_rng(8)
        for _ in range(100):
            graph, X, params = random_instance(rng, random_graph_factory)
            i = int(rng.integers(graph.n))
            h = 1e-6
            fd_grad = central_gradient(restricted(lambda Y: attractive_energy(graph, Y, params), X, i), X[i], h)
            assert relative_error(fd_grad, attr_gradient(graph, X, i, params)) < 1e-5
            fd_hess = central_jacobian(restricted(lambda Y: attr_gradient(graph, Y, i, params), X, i), X[i], h)
            assert relative_error(fd_hess, attr_hessian(graph, X, i, params)) < 1e-4

    def test_hessian_is_positive_semidefinite(self, random_graph_factory):
        """Test hessiana atractiva semidefinida, definida con vecinos no coincidentes"""
        rng = np.random.default_rng(13)
        for _ in range(100):
            graph, X, params = random_instance(rng, random_graph_factory)
            i = int(rng.integers(graph.n))
            H = attr_hessian(graph, X, i, params)
            eigenvalues = np.linalg.eigvalsh(H)
            assert eigenvalues.min() >= -1e-12
            if graph.degree(i) > 0:
                assert eigenvalues.min() > 0

    def test_local_model_matches_array_version(self, random_graph_factory):
        """Test el modelo escalar coincide con attr_gradient/attr_hessian"""
        rng = np.random.default_rng(17)
        graph, X, params = random_instance(rng, random_graph_factory)
        points = [tuple(p) for p in X.tolist()]
        for i in range(graph.n):
            gx, gy, hxx, hxy, hyy = attr_local_model(graph.neighbor_lists[i], points, i, params.k)
            assert np.allclose([gx, gy], attr_gradient(graph, X, i, params), rtol=1e-12, atol=1e-14)
            assert np.allclose([[hxx, hxy], [hxy, hyy]], attr_hessian(graph, X, i, params), rtol=1e-12, atol=1e-14)


class TestOptimalScale:
    """Tests de la escala óptima s*"""

    def test_two_vertices(self, two_vertices, unit_params):
        X = np.array([[0.0, 0.0], [1.0, 0.0]])
        assert optimal_scale(two_vertices, X, unit_params) == pytest.approx(1.0)

    def test_fixed_point_and_homogeneity(self, random_graph_factory):
        rng = np.random.default_rng(4)
        for _ in range(100):
            graph, X, params = random_instance(rng, random_graph_factory)
            s = optimal_scale(graph, X, params)
            assert optimal_scale(graph, scale_layout(X, s), params) == pytest.approx(1.0, abs=1e-9)
            assert optimal_scale(graph, 2 * X, params) == pytest.approx(s / 2, rel=1e-12)

    def test_stationary_and_convex(self, random_graph_factory):
        """Test φ'(s*) = 0 y φ(s*) mínimo local"""
        rng = np.random.default_rng(6)
        for _ in range(100):
            graph, X, params = random_instance(rng, random_graph_factory)
            s = optimal_scale(graph, X, params)
            assert abs(scaling_derivative(graph, X, params, s)) < 1e-9 * abs(scaling_derivative(graph, X, params, s / 2))
            best = scaling_potential(graph, X, params, s)
            for delta in (0.01, 0.1):
                assert best <= scaling_potential(graph, X, params, s * (1 + delta))
                assert best <= scaling_potential(graph, X, params, s * (1 - delta))

    def test_zero_length_edges(self, two_vertices, unit_params):
        with pytest.raises(ValueError):
            optimal_scale(two_vertices, np.zeros((2, 2)), unit_params)

    def test_scale_layout(self, random_graph_factory):
        X = np.array([[0.0, 0.0], [1.0, 0.0]])
        assert np.array_equal(scale_layout(X, 1.0), X)
        assert np.linalg.norm(np.diff(scale_layout(X, 2.0), axis=0)) == pytest.approx(2.0)
        with pytest.raises(ValueError):
            scale_layout(X, 0.0)
        rng = np.random.default_rng(1)
        graph, Y, params = random_instance(rng, random_graph_factory)
        assert attractive_energy(graph, scale_layout(Y, 1.7), params) == pytest.approx(
            1.7**3 * attractive_energy(graph, Y, params), rel=1e-12
        )


class TestGravity:
    """Tests del término de gravedad"""

    def test_isolated_vertices(self, unit_params):
        graph = Graph.from_edges(2, [])
        energy, grad = gravity_energy_and_gradient(graph, np.array([[0.0, 0.0], [1.0, 1.0]]), GravityConfig())
        assert energy == pytest.approx(0.5)
        assert np.allclose(grad, [[-0.5, -0.5], [0.5, 0.5]])

    def test_connected_rows_are_equal(self, cycle4):
        X = np.random.default_rng(0).random((4, 2))
        _, grad = gravity_energy_and_gradient(cycle4, X, GravityConfig())
        assert np.allclose(grad, grad[0])

    def test_centered_component_contributes_nothing(self, two_edges):
        X = np.array([[0.4, 0.5], [0.6, 0.5], [2.0, 2.0], [3.0, 2.0]])
        energy, grad = gravity_energy_and_gradient(two_edges, X, GravityConfig())
        assert np.allclose(grad[:2], 0.0)
        assert energy == pytest.approx(0.5 * 2 * (2.0**2 + 1.5**2))

    def test_active_only_when_disconnected(self, cycle4, two_edges, unit_params):
        assert not gravity_active(None, connected_components(cycle4))
        assert gravity_active(None, connected_components(two_edges))
        assert gravity_active(GravityConfig(enabled=True), connected_components(cycle4))
        X = np.array([[0.4, 0.5], [0.6, 0.5], [2.0, 2.0], [3.0, 2.0]])
        energy, grad = objective_and_gradient(two_edges, X, unit_params)
        assert energy == pytest.approx(total_energy(two_edges, X, unit_params) + 0.5 * 2 * (2.0**2 + 1.5**2))
        assert np.allclose(grad, energy_gradient(two_edges, X, unit_params) + np.array([[0, 0], [0, 0], [2.0, 1.5], [2.0, 1.5]]))
