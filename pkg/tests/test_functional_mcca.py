"""Tests for Fourier smoothing and multiple functional CCA."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from rmcca.core.exceptions import (
    DimensionMismatchError,
    EvenBasisSizeError,
    InsufficientUnitsError,
    InvalidVariableIndexError,
    OutOfIntervalError,
    UnderdeterminedFitError,
)
from rmcca.core.types import Method
from rmcca.methods.functional import (
    BasisSpec,
    CoefficientSet,
    assemble_functional_problem,
    coeff_covariances,
    fourier_basis,
    smooth_block,
    smooth_dataset,
    solve_coefficient_mcca,
    solve_functional_mcca,
    weight_curve_grid,
    weight_function,
)
from rmcca.methods.functional.basis import midpoint_grid
from rmcca.methods.kernel import KernelSpec, solve_kernel_mcca
from tests.conftest import make_dataset

SQRT2 = math.sqrt(2.0)


class TestFourierBasis:
    def test_constant_basis(self):
        assert_allclose(fourier_basis(1, 0.37), [1.0])

    def test_values_at_zero(self):
        assert_allclose(fourier_basis(3, 0.0), [1.0, 0.0, SQRT2], atol=1e-15)

    def test_array_shape(self):
        assert fourier_basis(5, np.linspace(0, 1, 7)).shape == (7, 5)

    @pytest.mark.parametrize("size", [0, 2, 4, -3])
    def test_rejects_even_size(self, size):
        with pytest.raises(EvenBasisSizeError):
            fourier_basis(size, 0.5)

    def test_rejects_points_outside_interval(self):
        with pytest.raises(OutOfIntervalError):
            fourier_basis(3, 1.5)

    def test_sine_cosine_orthogonal(self):
        values = fourier_basis(3, midpoint_grid(2048))
        assert abs(np.mean(values[:, 1] * values[:, 2])) < 1e-6

    @pytest.mark.parametrize("size", [1, 5, 9])
    def test_orthonormal(self, size):
        gram = BasisSpec(size=size, n_times=size).quadrature_gram()
        assert_allclose(gram, np.eye(size), atol=1e-6)

    def test_grid(self):
        assert_allclose(BasisSpec(size=3, n_times=5).grid, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert_allclose(BasisSpec(size=1, n_times=1).grid, [0.5])
        assert BasisSpec(size=3, n_times=5).interval == (0.0, 1.0)


class TestSmoothing:
    def test_constant_curve(self):
        basis = BasisSpec(size=5, n_times=20)
        coeffs = smooth_block(np.full((20, 1), 2.5), basis)
        assert_allclose(coeffs, [2.5, 0, 0, 0, 0], atol=1e-10)

    def test_sine_recovered(self):
        basis = BasisSpec(size=3, n_times=64)
        curve = SQRT2 * np.sin(2 * np.pi * basis.grid)
        assert_allclose(smooth_block(curve, basis), [0.0, 1.0, 0.0], atol=1e-8)

    def test_exact_recovery_in_span(self, rng):
        basis = BasisSpec(size=5, n_times=64)
        true = rng.normal(size=(5, 3))
        block = basis.design() @ true
        coeffs = smooth_block(block, basis)
        assert_allclose(coeffs, true.T.ravel(), atol=1e-8)
        assert_allclose(basis.design() @ coeffs.reshape(3, 5).T, block, atol=1e-8)

    def test_underdetermined(self):
        with pytest.raises(UnderdeterminedFitError) as excinfo:
            smooth_block(np.zeros((2, 1)), BasisSpec(size=3, n_times=2))
        assert excinfo.value.details == {"T": 2, "B": 3}

    def test_grid_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            smooth_block(np.zeros((10, 1)), BasisSpec(size=3, n_times=12))

    def test_dataset_matches_per_block(self, curve_dataset, quiet_logger):
        basis = BasisSpec(size=5, n_times=curve_dataset.T)
        coefficients = smooth_dataset(curve_dataset, basis, logger=quiet_logger)
        assert coefficients.n == curve_dataset.n and coefficients.L == curve_dataset.L
        assert_allclose(coefficients.coefficients[1][4], smooth_block(curve_dataset.block(1, 4), basis), atol=1e-12)

    def test_fitted_is_projection(self, curve_dataset):
        basis = BasisSpec(size=5, n_times=curve_dataset.T)
        coefficients = smooth_dataset(curve_dataset, basis)
        residual = curve_dataset.blocks[0] - coefficients.fitted(0)
        # residuals are orthogonal to the basis columns
        assert_allclose(np.einsum("tb,ntp->npb", basis.design(), residual), 0.0, atol=1e-9)


class TestCoeffCovariances:
    def test_scalar_pair(self):
        covs = coeff_covariances([np.array([[0.0], [2.0]]), np.array([[0.0], [2.0]])])
        assert_allclose(covs[0, 1], [[2.0]])
        assert_allclose(covs[0, 0], [[2.0]])

    def test_identical_units(self):
        views = [np.tile([1.0, 2.0, 3.0], (4, 1)), np.tile([5.0], (4, 1))]
        covs = coeff_covariances(views)
        for i in range(2):
            for j in range(2):
                assert_allclose(covs[i, j], 0.0, atol=1e-15)

    def test_exact_transposes(self, rng):
        views = [rng.normal(size=(15, d)) for d in (3, 5, 2)]
        covs = coeff_covariances(views)
        for i in range(3):
            for j in range(3):
                assert np.array_equal(covs[i, j], covs[j, i].T)
            assert np.linalg.eigvalsh(covs[i, i]).min() >= -1e-10

    def test_matches_numpy(self, rng):
        views = [rng.normal(size=(20, 2)), rng.normal(size=(20, 3))]
        covs = coeff_covariances(views)
        full = np.cov(np.hstack(views), rowvar=False)
        assert_allclose(covs[0, 1], full[:2, 2:], atol=1e-12)

    def test_accepts_coefficient_set(self, curve_dataset):
        coefficients = smooth_dataset(curve_dataset, BasisSpec(size=5, n_times=curve_dataset.T))
        assert isinstance(coefficients, CoefficientSet)
        covs = coeff_covariances(coefficients)
        assert covs[0, 1].shape == (10, 10)

    def test_single_unit(self):
        with pytest.raises(InsufficientUnitsError):
            coeff_covariances([np.ones((1, 2)), np.ones((1, 2))])


class TestAssemble:
    def test_scalar_instance(self):
        covs = coeff_covariances([np.array([[0.0], [2.0]]), np.array([[0.0], [2.0]])])
        m, b = assemble_functional_problem(covs, 0.5)
        assert_allclose(b, [[2.5, 0.0], [0.0, 2.5]])
        assert_allclose(m, [[0.0, 2.0], [2.0, 0.0]])

    def test_block_layout(self, rng):
        covs = coeff_covariances([rng.normal(size=(10, 2)), rng.normal(size=(10, 3))])
        m, b = assemble_functional_problem(covs, 0.1)
        assert_allclose(m[:2, 2:], covs[0, 1])
        assert_allclose(m[2:, :2], covs[1, 0])
        assert_allclose(b[:2, :2], covs[0, 0] + 0.1 * np.eye(2))

    def test_unit_ridge_on_zero_variance(self):
        views = [np.ones((3, 2)), np.ones((3, 1))]
        _, b = assemble_functional_problem(coeff_covariances(views), 1.0)
        assert_allclose(b, np.eye(3))


class TestWeightFunction:
    def test_constant_coefficient(self):
        assert weight_function(np.array([1.0, 0.0, 0.0]), 3, 0, 0.8) == pytest.approx(1.0)

    def test_zero_weights(self):
        assert_allclose(weight_function(np.zeros(6), 3, 1, np.linspace(0, 1, 5)), 0.0)

    def test_sine_slice(self):
        weights = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 0.0])
        assert weight_function(weights, BasisSpec(size=3, n_times=5), 1, 0.25) == pytest.approx(SQRT2)

    def test_invalid_variable(self):
        with pytest.raises(InvalidVariableIndexError):
            weight_function(np.zeros(6), 3, 2, 0.5)

    def test_out_of_interval(self):
        with pytest.raises(OutOfIntervalError):
            weight_function(np.zeros(3), 3, 0, -0.1)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            weight_function(np.zeros(4), 3, 0, 0.5)


class TestSolveFunctionalMcca:
    def test_solution_contract(self, curve_dataset, quiet_logger):
        solution = solve_functional_mcca(curve_dataset, 5, epsilon=0.1, k=3, logger=quiet_logger)
        assert solution.method is Method.FUNCTIONAL
        assert solution.params["basis_size"] == 5
        assert [w.shape for w in solution.weights] == [(10, 3), (10, 3)]
        assert np.all(np.diff(solution.correlations) <= 0)
        assert max(solution.diagnostics.constraint_residuals) < 1e-8
        assert_allclose(solution.scores.sum(axis=1), 0.0, atol=1e-8)

    def test_identical_coefficients(self, curve_dataset):
        block = curve_dataset.blocks[0]
        dataset = make_dataset([block, block.copy()])
        solution = solve_functional_mcca(dataset, 5, epsilon=1e-6, k=1)
        assert abs(solution.correlations[0] - 1.0) < 0.05

    def test_underdetermined_names_sizes(self, curve_dataset):
        with pytest.raises(UnderdeterminedFitError) as excinfo:
            solve_functional_mcca(curve_dataset, 13, epsilon=0.1, k=1)
        assert "T = 12" in str(excinfo.value) and "B = 13" in str(excinfo.value)

    def test_matches_linear_kernel_on_coefficients(self, curve_dataset):
        epsilon = 0.05
        n = curve_dataset.n
        functional = solve_functional_mcca(curve_dataset, 5, epsilon=epsilon, k=3)
        coefficients = smooth_dataset(curve_dataset, BasisSpec(size=5, n_times=curve_dataset.T))
        coefficient_data = make_dataset([c[:, None, :] for c in coefficients.coefficients])
        kernel = solve_kernel_mcca(
            coefficient_data, [KernelSpec("linear")] * 2, epsilon=epsilon * (n - 1) / n, k=3
        )
        assert_allclose(functional.correlations, kernel.correlations, atol=1e-8)

    def test_rotation_invariance(self, rng, curve_dataset):
        coefficients = smooth_dataset(curve_dataset, BasisSpec(size=5, n_times=curve_dataset.T)).coefficients
        base = solve_coefficient_mcca(coefficients, epsilon=0.1, k=3)
        rotations = [np.linalg.qr(rng.normal(size=(c.shape[1], c.shape[1])))[0] for c in coefficients]
        rotated = solve_coefficient_mcca([c @ q.T for c, q in zip(coefficients, rotations)], epsilon=0.1, k=3)
        assert_allclose(rotated.correlations, base.correlations, atol=1e-8)

    def test_reduction_identity(self, rng):
        size, n = 5, 8
        views = [rng.normal(size=(n, size)) for _ in range(2)]
        covs = coeff_covariances(views)
        w = [rng.normal(size=size) for _ in range(2)]

        grid = midpoint_grid()
        phi = fourier_basis(size, grid)
        u = [phi @ wl for wl in w]
        curves = [(v - v.mean(axis=0)) @ phi.T for v in views]
        projections = [c @ ul / grid.size for c, ul in zip(curves, u)]
        function_space = float(projections[0] @ projections[1]) / (n - 1)

        assert function_space == pytest.approx(float(w[0] @ covs[0, 1] @ w[1]), abs=1e-6)

    def test_weight_curve_grid(self, curve_dataset):
        solution = solve_functional_mcca(curve_dataset, 3, epsilon=0.1, k=2)
        rows = weight_curve_grid(solution, 3, points=11)
        assert len(rows) == 2 * 2 * 2 * 11
        c, l, v, t, value = rows[-1]
        assert (c, l, v, t) == (1, 1, 1, 1.0)
        expected = weight_function(solution.weights[1][:, 1], 3, 1, 1.0)
        assert value == pytest.approx(expected)
