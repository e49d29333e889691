"""Tests for the synthetic generator, the classical CCA oracle and the convergence study."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from rmcca.core.exceptions import InsufficientUnitsError, InvalidValueError, SingularCovarianceError
from rmcca.experiments import (
    SyntheticSpec,
    classical_cca_oracle,
    convergence_study,
    gen_latent_dataset,
    top_correlation,
)
from rmcca.methods.kernel import KernelSpec, solve_kernel_mcca


class TestClassicalOracle:
    def test_identical_sets(self, rng):
        x = rng.normal(size=(50, 3))
        assert classical_cca_oracle(x, x) == pytest.approx(1.0, abs=1e-10)

    def test_independent_sets(self):
        values = [
            classical_cca_oracle(*(np.random.default_rng(seed).normal(size=(2, 10000, 2))))
            for seed in range(20)
        ]
        assert np.median(values) < 0.1

    def test_known_scalar_correlation(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=50000)
        y = 0.6 * x + 0.8 * rng.normal(size=50000)
        assert classical_cca_oracle(x, y) == pytest.approx(0.6, abs=0.02)

    def test_affine_invariance(self, rng):
        x = rng.normal(size=(200, 2))
        y = x @ rng.normal(size=(2, 3)) + rng.normal(size=(200, 3))
        base = classical_cca_oracle(x, y)
        moved = classical_cca_oracle(x @ rng.normal(size=(2, 2)) + 4.0, y @ rng.normal(size=(3, 3)) - 1.0)
        assert moved == pytest.approx(base, abs=1e-8)

    def test_singular_covariance(self, rng):
        x = rng.normal(size=(30, 1))
        with pytest.raises(SingularCovarianceError):
            classical_cca_oracle(np.hstack([x, x]), rng.normal(size=(30, 2)))

    def test_too_few_units(self, rng):
        with pytest.raises(InsufficientUnitsError):
            classical_cca_oracle(rng.normal(size=(4, 2)), rng.normal(size=(4, 2)))


class TestSyntheticData:
    def test_deterministic(self):
        spec = SyntheticSpec(n=20, L=3, T=2, p=2, seed=5)
        assert gen_latent_dataset(spec).equals(gen_latent_dataset(spec))

    def test_replicates_differ(self):
        spec = SyntheticSpec(n=20, seed=5)
        first = gen_latent_dataset(spec.with_size(20, 0))
        second = gen_latent_dataset(spec.with_size(20, 1))
        assert not np.array_equal(first.blocks[0], second.blocks[0])

    def test_shape_and_labels(self):
        dataset = gen_latent_dataset(SyntheticSpec(n=120, L=3, T=4, p=2))
        assert (dataset.n, dataset.L, dataset.T, dataset.p) == (120, 3, 4, [2, 2, 2])
        assert dataset.unit_labels[0] == "u001" and dataset.feature_names == ["f1", "f2", "f3"]
        assert dataset.group_labels is None

    def test_groups(self):
        dataset = gen_latent_dataset(SyntheticSpec(n=90, n_groups=3, seed=2))
        counts = {g: dataset.group_labels.count(g) for g in set(dataset.group_labels)}
        assert sorted(counts) == ["g1", "g2", "g3"]
        assert all(25 <= c <= 35 for c in counts.values())

    def test_noise_free_is_perfectly_dependent(self):
        dataset = gen_latent_dataset(SyntheticSpec(n=50, L=2, T=1, p=2, noise_sd=0.0, seed=3))
        solution = solve_kernel_mcca(dataset, [KernelSpec("linear")] * 2, epsilon=1e-6, k=1)
        assert abs(solution.correlations[0] - 1.0) < 0.05

    def test_pure_noise(self):
        spec = SyntheticSpec(n=200, L=2, T=2, p=2, loading_scale=0.0, seed=3)
        dataset = gen_latent_dataset(spec)
        assert classical_cca_oracle(dataset.flattened(0), dataset.flattened(1)) < 0.5
        assert top_correlation(spec, "kernel", "linear", 1e-6) < 0.5

    @pytest.mark.parametrize("field,value", [("n", 2), ("L", 1), ("noise_sd", -1.0), ("n_groups", 500)])
    def test_invalid_spec(self, field, value):
        with pytest.raises(InvalidValueError):
            SyntheticSpec(**{field: value})


class TestConvergenceStudy:
    def test_single_cell(self):
        report = convergence_study(SyntheticSpec(T=1, p=1, seed=1), [30], reps=1)
        assert report.errors.shape == (1, 1)
        assert report.reference_size == 600
        assert report.epsilons == [pytest.approx(30 ** -0.25)]
        frame = report.errors_frame()
        assert list(frame.columns) == ["n", "rep", "epsilon", "estimate", "error"]
        assert len(frame) == 1 and frame["rep"].iloc[0] == 1
        document = report.to_dict()
        assert document["reference"]["capped"] is False
        assert "n" not in document["spec"]

    def test_noise_free_errors_small(self):
        template = SyntheticSpec(T=2, p=3, loading_scale=10.0, noise_sd=0.0, seed=4)
        report = convergence_study(template, [50, 100], reps=3)
        assert max(report.medians) < 0.02
        assert report.reference_correlation == pytest.approx(1.0, abs=0.02)

    def test_functional_method(self):
        template = SyntheticSpec(L=2, T=6, p=1, seed=6)
        report = convergence_study(template, [20, 40], reps=2, method="functional", basis_size=3)
        assert report.method == "functional"
        assert np.all(np.isfinite(report.errors))
        assert report.to_dict()["kernel"] is None

    def test_gaussian_reference_is_capped(self):
        report = convergence_study(
            SyntheticSpec(T=1, p=1, seed=2), [10], reps=1, kernel="gaussian", max_reference_size=100
        )
        assert report.reference_size == 100 and report.reference_capped

    def test_estimates_reproducible(self):
        template = SyntheticSpec(T=1, p=2, seed=9)
        first = convergence_study(template, [25], reps=2)
        second = convergence_study(template, [25], reps=2)
        assert_allclose(first.estimates, second.estimates, rtol=0, atol=0)

    @pytest.mark.parametrize("sizes", [[], [100, 50], [40, 40]])
    def test_rejects_bad_sizes(self, sizes):
        with pytest.raises(InvalidValueError):
            convergence_study(SyntheticSpec(), sizes, reps=1)

    def test_rejects_unknown_method(self):
        with pytest.raises(InvalidValueError):
            convergence_study(SyntheticSpec(), [10], reps=1, method="spectral")
