"""Tests for dataset ingestion, report files and scatter plots."""

import random

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from rmcca.analysis.visualizer import Visualizer, scatter_filename, write_scatter
from rmcca.core.exceptions import (
    DuplicateCellError,
    InconsistentShapeError,
    InputFileError,
    InvalidComponentIndexError,
    InvalidValueError,
    MissingCellError,
    NonNumericValueError,
    SchemaError,
)
from rmcca.core.types import canonical_points
from rmcca.evaluation.hopkins import hopkins
from rmcca.io.dataset import load_dataset, parse_dataset, serialize_dataset
from rmcca.io.report import read_points, read_report, read_scores_csv, write_report, write_scores_csv
from rmcca.methods.kernel import resolve_kernel_specs, solve_kernel_mcca
from tests.conftest import full_rows, long_csv


class TestParseDataset:
    def test_minimal_valid_file(self):
        dataset = parse_dataset(long_csv(full_rows(3, ("a", "b"))))
        assert (dataset.n, dataset.L, dataset.T, dataset.p) == (3, 2, 1, [1, 1])
        assert dataset.unit_labels == ["u1", "u2", "u3"]
        assert dataset.feature_names == ["a", "b"]

    def test_single_feature_rejected(self):
        rows = [(f"u{k}", "a", t, 1, float(k + t)) for k in (1, 2) for t in (1, 2)]
        with pytest.raises(InvalidValueError):
            parse_dataset(long_csv(rows))

    def test_duplicate_row_names_coordinates(self):
        rows = full_rows(3, ("a", "b"))
        rows.append(rows[1])
        with pytest.raises(DuplicateCellError) as excinfo:
            parse_dataset(long_csv(rows))
        assert excinfo.value.details["unit"] == rows[1][0]
        assert excinfo.value.details["feature"] == rows[1][1]

    def test_missing_cell(self):
        rows = full_rows(3, ("a", "b"), times=(1, 2))
        del rows[3]
        with pytest.raises(MissingCellError):
            parse_dataset(long_csv(rows))

    def test_non_numeric_value(self):
        rows = full_rows(3, ("a", "b"))
        rows[2] = rows[2][:4] + ("high",)
        with pytest.raises(NonNumericValueError) as excinfo:
            parse_dataset(long_csv(rows))
        assert "high" in str(excinfo.value)

    def test_non_finite_value(self):
        rows = full_rows(3, ("a", "b"))
        rows[0] = rows[0][:4] + ("inf",)
        with pytest.raises(NonNumericValueError):
            parse_dataset(long_csv(rows))

    def test_inconsistent_variable_set(self):
        rows = full_rows(3, ("a", "b"))
        rows[0] = rows[0][:3] + (2,) + rows[0][4:]
        with pytest.raises(InconsistentShapeError):
            parse_dataset(long_csv(rows))

    def test_bad_header(self):
        with pytest.raises(SchemaError):
            parse_dataset("unit,feature,time,value\nu1,a,1,0.5\n")

    def test_empty_document(self):
        with pytest.raises(SchemaError):
            parse_dataset("")

    def test_block_layout(self):
        rows = [
            (u, f, t, v, 100 * k + 10 * t + v)
            for k, u in enumerate(["x", "y", "z"])
            for f in ("a", "b")
            for t in (2, 1)
            for v in (1, 2)
        ]
        dataset = parse_dataset(long_csv(rows))
        assert dataset.time_labels == ["1", "2"]
        assert_array_equal(dataset.block(0, 1), [[111, 112], [121, 122]])

    def test_numeric_time_order(self):
        rows = [(f"u{k}", f, t, 1, k * t) for k in range(3) for f in ("a", "b") for t in (10, 2, 1)]
        assert parse_dataset(long_csv(rows)).time_labels == ["1", "2", "10"]

    def test_groups(self):
        rows = [row + (("north" if row[0] != "u3" else "south"),) for row in full_rows(3, ("a", "b"))]
        dataset = parse_dataset(long_csv(rows, group=True))
        assert dataset.group_labels == ["north", "north", "south"]

    def test_conflicting_groups(self):
        rows = [row + (("g1" if i else "g2"),) for i, row in enumerate(full_rows(3, ("a", "b")))]
        with pytest.raises(InvalidValueError):
            parse_dataset(long_csv(rows, group=True))

    def test_round_trip(self, latent_dataset):
        parsed = parse_dataset(serialize_dataset(latent_dataset))
        assert parsed.equals(latent_dataset)
        for a, b in zip(parsed.blocks, latent_dataset.blocks):
            assert_array_equal(a, b)

    def test_row_shuffle_invariance(self, latent_dataset):
        lines = serialize_dataset(latent_dataset).splitlines()
        body = lines[1:]
        random.Random(4).shuffle(body)
        shuffled = parse_dataset("\n".join([lines[0]] + body) + "\n")
        assert shuffled.equals(latent_dataset)

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(InputFileError) as excinfo:
            load_dataset(tmp_path / "nope.csv")
        assert "nope.csv" in str(excinfo.value)


class TestStandardize:
    def test_zero_mean_unit_variance(self, latent_dataset):
        scaled = latent_dataset.standardized()
        for block in scaled.blocks:
            assert_allclose(block.mean(axis=(0, 1)), 0.0, atol=1e-12)
            assert_allclose(block.std(axis=(0, 1)), 1.0, atol=1e-12)


@pytest.fixture
def solution(latent_dataset):
    specs = resolve_kernel_specs(latent_dataset, "linear")
    return solve_kernel_mcca(latent_dataset, specs, epsilon=0.1, k=3)


class TestReport:
    def test_round_trip(self, solution, tmp_path):
        path = write_report(solution, None, tmp_path / "report.json")
        report = read_report(path)
        assert len(report["correlations"]) == 3
        assert report["correlations"] == sorted(report["correlations"], reverse=True)
        for read, original in zip(report["correlations"], solution.correlations):
            assert float(f"{read:.15g}") == float(f"{original:.15g}")
        assert "clusterability" not in report
        assert report["diagnostics"]["deflated_rank"] == solution.diagnostics.deflated_rank

    def test_clusterability_section(self, solution, tmp_path):
        result = hopkins(canonical_points(solution.scores, [0, 1]), m=4, reps=5, seed=1)
        report = read_report(write_report(solution, result, tmp_path / "report.json"))
        assert report["clusterability"]["H"] == pytest.approx(result.H)
        assert report["clusterability"]["m"] == 4

    def test_scores_round_trip(self, solution, tmp_path):
        path = write_scores_csv(solution, tmp_path / "scores.csv")
        assert path.read_text().splitlines()[0] == "unit,component,feature,score"
        scores, units, features = read_scores_csv(path)
        assert_array_equal(scores, solution.scores)
        assert units == solution.unit_labels
        assert features == solution.feature_names

    def test_read_points_detects_scores(self, solution, tmp_path):
        scores, _ = read_points(write_scores_csv(solution, tmp_path / "scores.csv"))
        assert_array_equal(scores, solution.scores)

    def test_read_points_plain_matrix(self, tmp_path):
        path = tmp_path / "points.csv"
        path.write_text("x,y\n0.5,1\n2,3\n")
        scores, points = read_points(path)
        assert scores is None
        assert_array_equal(points, [[0.5, 1.0], [2.0, 3.0]])


class TestScatter:
    scores = np.array([[[0.0], [1.0], [2.0]], [[1.0], [0.0], [3.0]]])

    def figure(self, group_labels=None, scores=None):
        visualizer = Visualizer()
        points = canonical_points(self.scores if scores is None else scores, (0, 1))
        return visualizer.render(visualizer.scatter_data(points, group_labels))

    def test_three_points_single_color(self):
        ax = self.figure().axes[0]
        assert len(ax.collections) == 1
        assert_allclose(ax.collections[0].get_offsets(), [[0.0, 1.0], [1.0, 0.0], [2.0, 3.0]])
        assert ax.get_xlabel() == "U^(1)" and ax.get_ylabel() == "U^(2)"
        assert ax.get_legend() is None

    def test_groups_get_legend(self):
        ax = self.figure(["a", "b", "a"]).axes[0]
        colors = {tuple(c.get_facecolors()[0]) for c in ax.collections}
        assert len(colors) == 2
        assert [t.get_text() for t in ax.get_legend().get_texts()] == ["a", "b"]
        assert len(ax.collections[0].get_offsets()) == 2

    def test_identical_scores(self, tmp_path):
        flat = np.zeros((2, 3, 1))
        ax = self.figure(scores=flat).axes[0]
        assert_allclose(ax.collections[0].get_offsets(), 0.0)
        svg = write_scatter(flat, None, tmp_path / "s.svg").read_text()
        assert svg.rstrip().endswith("</svg>")

    def test_canvas_and_margins(self, tmp_path):
        figure = self.figure()
        assert tuple(figure.get_size_inches() * figure.dpi) == pytest.approx((800.0, 600.0))
        assert figure.axes[0].get_position().bounds == pytest.approx((0.1, 0.1, 0.8, 0.8))
        svg = write_scatter(self.scores, None, tmp_path / "s.svg").read_text()
        assert 'viewBox="0 0 800 600"' in svg
        assert "U^(1)" in svg and "U^(2)" in svg

    def test_points_inside_axes(self):
        ax = self.figure().axes[0]
        x_lo, x_hi = ax.get_xlim()
        y_lo, y_hi = ax.get_ylim()
        for x, y in ax.collections[0].get_offsets():
            assert x_lo < x < x_hi and y_lo < y < y_hi

    def test_deterministic_bytes(self, tmp_path):
        a = write_scatter(self.scores, ["g", "h", "g"], tmp_path / "a.svg").read_bytes()
        b = write_scatter(self.scores, ["g", "h", "g"], tmp_path / "b.svg").read_bytes()
        assert a == b

    def test_invalid_component(self, tmp_path):
        with pytest.raises(InvalidComponentIndexError):
            write_scatter(self.scores, None, tmp_path / "s.svg", components=(0, 2))

    def test_plot_data(self):
        data = Visualizer().scatter_data(np.array([[0.0, 1.0]]), ["g"])
        assert data["type"] == "scatter"
        assert data["legend"] == [{"label": "g", "color": data["data"][0]["color"]}]
        assert data["data"][0]["group"] == "g"

    def test_filename(self):
        assert scatter_filename([0, 1]) == "scatter_1_2.svg"
