"""Tests for the Hopkins statistic and its Beta(m, m) test."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import special, stats
from scipy.spatial import Delaunay

from rmcca.core.exceptions import (
    DegenerateRegionError,
    InvalidValueError,
    OutOfRangeError,
    TooManyProbesError,
)
from rmcca.evaluation import (
    SamplingRegion,
    hopkins,
    hopkins_curve,
    hopkins_once,
    hopkins_pvalue,
    interpret_hopkins,
    regularized_incomplete_beta,
    replication_rng,
)


def two_clusters(rng, n=100, separation=10.0, dim=2):
    centers = np.zeros((2, dim))
    centers[1, 0] = separation
    labels = np.arange(n) % 2
    return centers[labels] + rng.normal(size=(n, dim))


class TestIncompleteBeta:
    def test_boundaries(self):
        assert regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0
        assert regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0

    @pytest.mark.parametrize("x", [0.1, 0.37, 0.5, 0.93])
    def test_uniform(self, x):
        assert regularized_incomplete_beta(x, 1.0, 1.0) == pytest.approx(x, abs=1e-12)

    def test_symmetric_midpoint(self):
        assert regularized_incomplete_beta(0.5, 2.0, 2.0) == pytest.approx(0.5, abs=1e-12)

    def test_matches_scipy(self, rng):
        for _ in range(50):
            x = rng.uniform()
            a, b = rng.uniform(0.2, 40.0, size=2)
            assert regularized_incomplete_beta(x, a, b) == pytest.approx(special.betainc(a, b, x), abs=1e-10)

    def test_reflection(self, rng):
        for _ in range(50):
            x = rng.uniform()
            a, b = rng.uniform(0.5, 30.0, size=2)
            total = regularized_incomplete_beta(x, a, b) + regularized_incomplete_beta(1.0 - x, b, a)
            assert total == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("x,a,b", [(-0.1, 1.0, 1.0), (1.2, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, -2.0)])
    def test_out_of_range(self, x, a, b):
        with pytest.raises(OutOfRangeError):
            regularized_incomplete_beta(x, a, b)


class TestPValue:
    def test_center(self):
        assert hopkins_pvalue(0.5, 10) == pytest.approx(1.0)

    def test_boundary(self):
        assert hopkins_pvalue(1.0, 10) == pytest.approx(0.0, abs=1e-12)

    def test_against_beta_distribution(self):
        expected = 2.0 * stats.beta(12, 12).sf(0.75)
        assert hopkins_pvalue(0.75, 12) == pytest.approx(expected, abs=1e-10)

    def test_against_monte_carlo(self):
        draws = np.random.default_rng(2024).beta(12, 12, size=1_000_000)
        assert hopkins_pvalue(0.75, 12) == pytest.approx(2.0 * np.mean(draws > 0.75), abs=0.01)

    def test_two_sided(self):
        assert hopkins_pvalue(0.3, 8) == pytest.approx(hopkins_pvalue(0.7, 8), abs=1e-12)

    def test_rejects_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            hopkins_pvalue(1.5, 10)
        with pytest.raises(OutOfRangeError):
            hopkins_pvalue(0.5, 0)


def uniform_null_values(seed, reps, region="box", n=100, m=10):
    values = []
    for r in range(reps):
        rng = replication_rng(seed, r)
        points = rng.uniform(size=(n, 2))
        values.append(hopkins_once(points, m, rng, region=region))
    return np.array(values)


class TestHopkinsOnce:
    def test_uniform_mean_near_half(self):
        assert 0.45 <= uniform_null_values(3, 200).mean() <= 0.55

    def test_torus_mean_near_half(self):
        assert 0.47 <= uniform_null_values(5, 300, region="torus").mean() <= 0.53

    def test_torus_distances_wrap(self):
        points = np.array([[0.0, 0.0], [1.0, 1.0], [0.1, 0.5], [0.95, 0.5]])
        region = SamplingRegion(points, "torus")
        assert region.distances(points[2:3], points[3:4])[0, 0] == pytest.approx(0.15)
        assert region.distances(points[:1], points[1:2])[0, 0] == pytest.approx(0.0)
        assert_allclose(SamplingRegion(points, "box").distances(points[2:3], points[3:4]), [[0.85]])

    def test_torus_affine_invariance(self, rng):
        points = rng.normal(size=(60, 2))
        moved = 2.5 * points - 1.0
        for r in range(10):
            base = hopkins_once(points, 6, replication_rng(4, r), region="torus")
            assert hopkins_once(moved, 6, replication_rng(4, r), region="torus") == pytest.approx(base, abs=1e-9)

    def test_clusters(self, rng):
        points = two_clusters(rng)
        values = [hopkins_once(points, 10, replication_rng(1, r)) for r in range(50)]
        assert np.mean(values) > 0.75

    def test_too_many_probes(self, rng):
        points = rng.uniform(size=(10, 2))
        with pytest.raises(TooManyProbesError):
            hopkins_once(points, 10, replication_rng(0, 0))

    def test_in_unit_interval(self, rng):
        points = rng.normal(size=(40, 3))
        for r in range(20):
            assert 0.0 <= hopkins_once(points, 4, replication_rng(0, r)) <= 1.0

    def test_affine_invariance(self, rng):
        points = rng.normal(size=(60, 2))
        moved = 3.7 * points + np.array([5.0, -2.0])
        for r in range(10):
            base = hopkins_once(points, 6, replication_rng(9, r))
            assert hopkins_once(moved, 6, replication_rng(9, r)) == pytest.approx(base, abs=1e-9)

    def test_classical_exponent(self, rng):
        points = rng.normal(size=(30, 2))
        value = hopkins_once(points, 3, replication_rng(0, 0), exponent=1)
        assert 0.0 <= value <= 1.0


class TestHopkins:
    def test_single_replication(self, rng):
        points = rng.uniform(size=(50, 2))
        result = hopkins(points, m=5, reps=1, seed=4)
        assert result.H == result.H_values[0]
        assert result.H == hopkins_once(points, 5, replication_rng(4, 0))

    def test_deterministic(self, rng):
        points = rng.uniform(size=(80, 2))
        first = hopkins(points, m=8, reps=20, seed=7)
        second = hopkins(points, m=8, reps=20, seed=7)
        assert_array_equal(first.H_values, second.H_values)

    def test_seed_changes_values(self, rng):
        points = rng.uniform(size=(80, 2))
        first = hopkins(points, m=8, reps=50, seed=7)
        second = hopkins(points, m=8, reps=50, seed=8)
        assert first.H_values != second.H_values
        assert abs(first.H - second.H) < 0.1

    def test_result_fields(self, rng):
        result = hopkins(rng.uniform(size=(95, 3)), reps=10, seed=1)
        assert result.m == 10 and result.d == 3 and result.dimension == 3
        assert result.H == pytest.approx(np.mean(result.H_values))
        assert 0.0 <= result.p_value <= 1.0
        assert result.region == "box"
        document = result.to_dict()
        assert document["rng"].startswith("philox")
        assert len(document["H_values"]) == 10

    def test_classical_variant(self, rng):
        assert hopkins(rng.uniform(size=(30, 3)), m=3, reps=2, classical=True).d == 1

    def test_degenerate_region(self):
        points = np.column_stack([np.linspace(0, 1, 20), np.zeros(20)])
        with pytest.raises(DegenerateRegionError) as excinfo:
            hopkins(points, m=2, reps=1)
        assert excinfo.value.details["coordinates"] == [2]

    def test_identical_points(self):
        with pytest.raises(DegenerateRegionError):
            hopkins(np.ones((10, 2)), m=2, reps=1)

    def test_hull_region(self, rng):
        points = rng.uniform(size=(60, 2))
        result = hopkins(points, m=6, reps=5, region="hull")
        assert result.region == "hull"
        region = SamplingRegion(points, "hull")
        probes = region.sample(replication_rng(0, 0), 25)
        assert probes.shape == (25, 2)
        assert np.all(Delaunay(points).find_simplex(probes) >= 0)

    def test_collinear_hull(self):
        points = np.column_stack([np.linspace(0, 1, 10), np.linspace(0, 2, 10)])
        with pytest.raises(DegenerateRegionError):
            SamplingRegion(points, "hull")

    def test_unknown_region(self, rng):
        with pytest.raises(InvalidValueError):
            hopkins(rng.uniform(size=(20, 2)), m=2, reps=1, region="sphere")

    def test_separation_trend(self):
        means = []
        for separation in (0.0, 2.5, 5.0, 7.5, 10.0):
            points = two_clusters(np.random.default_rng(0), separation=separation)
            means.append(hopkins(points, m=10, reps=200, seed=1).H)
        assert means[-1] > means[0]
        assert all(later >= earlier - 0.02 for earlier, later in zip(means, means[1:]))


class TestCurveAndInterpretation:
    def test_curve(self, rng):
        scores = rng.normal(size=(3, 40, 2))
        results = hopkins_curve(scores, 3, m=4, reps=3, seed=2)
        assert [r.dimension for r in results] == [1, 2, 3]
        assert_allclose(results[1].H, hopkins(scores[:2].mean(axis=2).T, m=4, reps=3, seed=2).H)

    def test_curve_bounds(self, rng):
        with pytest.raises(InvalidValueError):
            hopkins_curve(rng.normal(size=(2, 20, 2)), 3)

    def test_interpretation(self, rng):
        clustered = hopkins(two_clusters(rng), m=10, reps=20)
        assert interpret_hopkins(clustered) == "clustering tendency"
        uniform = hopkins(rng.uniform(size=(100, 2)), m=10, reps=1, seed=0)
        uniform.H, uniform.p_value = 0.5, 1.0
        assert interpret_hopkins(uniform) == "spatially random"
        uniform.H, uniform.p_value = 0.3, 0.01
        assert interpret_hopkins(uniform) == "regular (repelling)"
