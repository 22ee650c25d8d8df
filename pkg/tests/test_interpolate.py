import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import KERNELS, random_distinct
from oracles import gram, power_sq_dense
from pgreedy import (
    ConditioningError,
    InputError,
    KernelSpec,
    StopCriteria,
    build_interpolant,
    direct_solve,
    eval_kernel,
    evaluate_interpolant,
    newton_coefficients,
    power_function_direct,
    residual_native_norm,
    run_pgreedy,
)


@pytest.fixture
def five_run(gauss1, five_points):
    return run_pgreedy(gauss1, five_points)


def test_single_translate_coefficient(gauss1, five_points):
    trace = run_pgreedy(gauss1, five_points, StopCriteria(1e-15, 1))
    x1 = five_points[trace.selected_index[0]]
    c = newton_coefficients([eval_kernel(gauss1, x1, x1)], trace.state)
    np.testing.assert_array_equal(c, [1.0])


def test_zero_data_gives_zero_coefficients(five_run):
    np.testing.assert_array_equal(newton_coefficients(np.zeros(5), five_run.state), np.zeros(5))


def test_coefficient_length_checked(five_run):
    with pytest.raises(InputError):
        newton_coefficients(np.zeros(3), five_run.state)


def test_sine_coefficients_match_dense_solve(gauss1, five_points, five_run):
    centers = five_points[five_run.selected_index]
    f = np.sin(2 * centers[:, 0])
    interp = build_interpolant(gauss1, five_points, five_run.state, f)
    np.testing.assert_allclose(interp.kernel_coeffs, direct_solve(gauss1, centers, f), atol=1e-8)
    np.testing.assert_allclose(interp.kernel_coeffs, np.linalg.solve(gram("gaussian", centers, centers), f), atol=1e-8)


def test_sine_interpolant_on_test_grid(gauss1, five_points, five_run):
    centers = five_points[five_run.selected_index]
    f = np.sin(2 * centers[:, 0])
    interp = build_interpolant(gauss1, five_points, five_run.state, f)
    xs = np.linspace(-1, 1, 100)[:, None]
    dense = gram("gaussian", xs, centers) @ np.linalg.solve(gram("gaussian", centers, centers), f)
    np.testing.assert_allclose(evaluate_interpolant(interp, xs), dense, atol=1e-8)


def test_interpolation_conditions(gauss1, five_points, five_run):
    centers = five_points[five_run.selected_index]
    f = np.sin(2 * centers[:, 0])
    interp = build_interpolant(gauss1, five_points, five_run.state, f)
    for x, fx in zip(centers, f):
        assert evaluate_interpolant(interp, x) == pytest.approx(fx, rel=1e-8, abs=1e-12)


def test_single_translate_is_reproduced(gauss1, five_points):
    trace = run_pgreedy(gauss1, five_points, StopCriteria(1e-15, 1))
    x1 = five_points[trace.selected_index[0]]
    interp = build_interpolant(gauss1, five_points, trace.state, [1.0])
    for x in np.linspace(-2, 2, 17):
        assert evaluate_interpolant(interp, [x]) == pytest.approx(eval_kernel(gauss1, [x], x1), abs=1e-12)


def test_precomputed_newton_values(gauss1, five_points, five_run):
    f = np.cos(five_points[five_run.selected_index, 0])
    interp = build_interpolant(gauss1, five_points, five_run.state, f)
    via_table = evaluate_interpolant(interp, five_points, five_run.state.newton_values)
    np.testing.assert_allclose(via_table, evaluate_interpolant(interp, five_points), atol=1e-12)


def test_interpolant_csv(tmp_path, gauss1, five_points, five_run):
    f = np.sin(2 * five_points[five_run.selected_index, 0])
    interp = build_interpolant(gauss1, five_points, five_run.state, f)
    interp.to_csv(tmp_path / "i.csv")
    rows = (tmp_path / "i.csv").read_text().splitlines()
    assert rows[0] == "x1,alpha" and len(rows) == 6


class TestDirectSolve:
    def test_single_center(self, gauss1):
        np.testing.assert_allclose(direct_solve(gauss1, [[0.4]], [2.5]), [2.5])

    def test_row_of_matrix_gives_unit_vector(self):
        spec = KernelSpec("wendland", dim=2, k=1)
        X = random_distinct(np.random.default_rng(3), 10, 2)
        A = gram("wendland-k1", X, X)
        np.testing.assert_allclose(direct_solve(spec, X, A[:, 4]), np.eye(10)[4], atol=1e-10)

    def test_random_residual(self):
        rng = np.random.default_rng(11)
        spec = KernelSpec("wendland", dim=3, k=2)
        X = random_distinct(rng, 10, 3)
        b = rng.normal(size=10)
        alpha = direct_solve(spec, X, b)
        assert np.max(np.abs(gram("wendland-k2", X, X) @ alpha - b)) <= 1e-10 * np.max(np.abs(b))

    def test_singular_reported(self, gauss1):
        X = np.linspace(0, 1e-6, 6)[:, None]
        with pytest.raises(ConditioningError):
            direct_solve(gauss1, X, np.ones(6))


class TestPowerFunctionDirect:
    def test_zero_at_centers(self, gauss1, five_points):
        for x in five_points[:3]:
            assert power_function_direct(gauss1, five_points[:3], x) < 1e-8

    def test_empty_centers(self, gauss1):
        assert power_function_direct(gauss1, np.empty((0, 1)), [0.3]) == 1.0
        assert residual_native_norm(gauss1, np.empty((0, 1)), [0.3]) == 1.0

    def test_matches_incremental(self, gauss1, five_points):
        for m in range(1, 5):
            trace = run_pgreedy(gauss1, five_points, StopCriteria(1e-15, m))
            centers = five_points[trace.selected_index]
            direct = power_function_direct(gauss1, centers, five_points)
            np.testing.assert_allclose(np.sqrt(trace.state.power_sq), direct, atol=1e-8)

    def test_residual_norm_zero_at_center(self, gauss1, five_points):
        assert residual_native_norm(gauss1, five_points, five_points[2]) < 1e-8

    def test_vector_and_scalar_forms_agree(self):
        spec = KernelSpec("wendland", dim=2, k=0)
        X = random_distinct(np.random.default_rng(5), 8, 2)
        Q = random_distinct(np.random.default_rng(6), 5, 2)
        vec = power_function_direct(spec, X, Q)
        assert vec.shape == (5,)
        assert power_function_direct(spec, X, Q[1]) == vec[1]


@pytest.mark.parametrize("seed", range(10))
def test_two_formulas_for_power_function(seed):
    rng = np.random.default_rng(seed)
    kid = KERNELS[seed % 4]
    dim = 1 + seed % 3
    spec = KernelSpec.from_id(kid, 1.0, dim)
    n = 5 if kid == "gaussian" else 12
    X = random_distinct(rng, n, dim)
    x = random_distinct(rng, 1, dim)[0]
    assert residual_native_norm(spec, X, x) == pytest.approx(power_function_direct(spec, X, x), abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(KERNELS), st.integers(1, 3), st.integers(0, 2**31))
def test_error_bound_for_kernel_translates(kid, dim, seed):
    rng = np.random.default_rng(seed)
    spec = KernelSpec.from_id(kid, 1.0, dim)
    X = random_distinct(rng, 60, dim)
    trace = run_pgreedy(spec, X, StopCriteria(1e-10, 12))
    centers = X[trace.selected_index]
    y = random_distinct(rng, 1, dim)[0]
    f = gram(kid, centers, [y])[:, 0]
    interp = build_interpolant(spec, X, trace.state, f)
    for x in random_distinct(rng, 5, dim):
        err = abs(eval_kernel(spec, x, y) - evaluate_interpolant(interp, x))
        bound = power_function_direct(spec, centers, x) * math.sqrt(eval_kernel(spec, y, y))
        assert err <= bound + 1e-10


@pytest.mark.parametrize("kid", KERNELS)
def test_dictionary_sup_identity(kid):
    rng = np.random.default_rng(len(kid))
    spec = KernelSpec.from_id(kid, 1.0, 2)
    X = random_distinct(rng, 80, 2)
    trace = run_pgreedy(spec, X, StopCriteria(1e-10, 10))
    centers = X[trace.selected_index]
    sup_residual = residual_native_norm(spec, centers, X).max()
    sup_power = power_function_direct(spec, centers, X).max()
    assert sup_residual == pytest.approx(sup_power, abs=1e-8)
    assert sup_power == pytest.approx(math.sqrt(max(power_sq_dense(kid, centers, X).max(), 0)), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(KERNELS), st.integers(1, 3), st.integers(0, 2**31))
def test_newton_and_direct_paths_agree(kid, dim, seed):
    rng = np.random.default_rng(seed)
    spec = KernelSpec.from_id(kid, 1.0, dim)
    X = random_distinct(rng, 70, dim)
    trace = run_pgreedy(spec, X, StopCriteria(1e-10, 30))
    centers = X[trace.selected_index]
    A = gram(kid, centers, centers)
    if np.linalg.cond(A) >= 1e8:
        return
    f = np.sin(3 * centers.sum(axis=1))
    interp = build_interpolant(spec, X, trace.state, f)
    Q = random_distinct(rng, 40, dim)
    dense = gram(kid, Q, centers) @ np.linalg.solve(A, f)
    np.testing.assert_allclose(evaluate_interpolant(interp, Q), dense, atol=1e-8)
    np.testing.assert_allclose(evaluate_interpolant(interp, centers), f, rtol=1e-8, atol=1e-10)
