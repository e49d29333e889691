"""Scatter plots of canonical scores as standalone SVG documents."""

import io
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from rmcca.core.exceptions import InvalidComponentIndexError, OutputFileError
from rmcca.core.types import canonical_points

WIDTH = 800
HEIGHT = 600
MARGIN = 0.1
POINT_SIZE = 30
PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]

# One SVG unit per point at 72 dpi; fixed salt and no date keep the bytes stable.
SVG_DPI = 72
SVG_RC = {
    "svg.hashsalt": "rmcca",
    "svg.fonttype": "none",
    "axes.formatter.useoffset": False,
}


class Visualizer:
    """Creates score scatter plots.

    Plot data is prepared as a dictionary first, then drawn with matplotlib
    and written as SVG.
    """

    def __init__(self, output_dir: Optional[Path] = None):
        """Initialize visualizer.

        Args:
            output_dir: Directory to save plots (default: current directory)
        """
        self.output_dir = Path(output_dir) if output_dir else Path(".")

    def scatter_data(
        self,
        points: np.ndarray,
        group_labels: Optional[Sequence[str]] = None,
        axis_labels: Sequence[str] = ("U^(1)", "U^(2)"),
        title: str = "",
    ) -> Dict[str, Any]:
        """Prepare data for a two-dimensional scatter plot.

        Args:
            points: n x 2 coordinates
            group_labels: Optional group per point
            axis_labels: x and y labels
            title: Optional title

        Returns:
            Plot data dictionary
        """
        points = np.asarray(points, dtype=float)
        groups = list(dict.fromkeys(group_labels)) if group_labels is not None else []
        colors = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(groups)}

        plot_data = {
            "type": "scatter",
            "title": title,
            "x_label": axis_labels[0],
            "y_label": axis_labels[1],
            "legend": [{"label": g, "color": colors[g]} for g in groups],
            "data": [],
        }
        for i, (x, y) in enumerate(points):
            group = group_labels[i] if group_labels is not None else None
            plot_data["data"].append({
                "x": float(x),
                "y": float(y),
                "group": group,
                "color": colors[group] if group is not None else PALETTE[0],
            })
        return plot_data

    def render(self, plot_data: Dict[str, Any]) -> Figure:
        """Draw prepared scatter data on a new figure.

        One collection is drawn per group (or a single one without groups),
        in order of first appearance.
        """
        figure = Figure(figsize=(WIDTH / SVG_DPI, HEIGHT / SVG_DPI), dpi=SVG_DPI)
        figure.subplots_adjust(left=MARGIN, right=1.0 - MARGIN, bottom=MARGIN, top=1.0 - MARGIN)
        ax = figure.add_subplot(1, 1, 1)

        if plot_data["legend"]:
            for entry in plot_data["legend"]:
                members = [p for p in plot_data["data"] if p["group"] == entry["label"]]
                ax.scatter(
                    [p["x"] for p in members],
                    [p["y"] for p in members],
                    s=POINT_SIZE,
                    color=entry["color"],
                    label=str(entry["label"]),
                )
            ax.legend(loc="best", fontsize="small")
        else:
            ax.scatter(
                [p["x"] for p in plot_data["data"]],
                [p["y"] for p in plot_data["data"]],
                s=POINT_SIZE,
                color=PALETTE[0],
            )

        ax.set_xlabel(plot_data["x_label"])
        ax.set_ylabel(plot_data["y_label"])
        if plot_data["title"]:
            ax.set_title(plot_data["title"])
        return figure

    def render_svg(self, plot_data: Dict[str, Any]) -> bytes:
        """Render prepared scatter data as SVG bytes."""
        buffer = io.BytesIO()
        with matplotlib.rc_context(SVG_RC):
            figure = self.render(plot_data)
            figure.savefig(buffer, format="svg", metadata={"Date": None})
        return buffer.getvalue()

    def save(self, svg: bytes, filename: str) -> Path:
        """Write an SVG document into the output directory."""
        path = self.output_dir / filename
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(svg)
        except OSError as e:
            raise OutputFileError(f"cannot write {path}", {"path": str(path), "error": str(e)})
        return path


def write_scatter(
    scores: np.ndarray,
    group_labels: Optional[Sequence[str]],
    path: Union[str, Path],
    components: Sequence[int] = (0, 1),
    feature: Optional[int] = None,
) -> Path:
    """Scatter units on the plane of two components.

    Args:
        scores: Array (K, n, L) of canonical scores
        group_labels: Optional group per unit (one color per group plus a legend)
        path: Output SVG path
        components: Two 0-based component indices
        feature: Score feature per axis (default: mean over features)

    Raises:
        InvalidComponentIndexError: If a component index is out of range
    """
    if len(components) != 2:
        raise InvalidComponentIndexError("a scatter plot needs exactly two components", {"components": list(components)})
    points = canonical_points(scores, components, feature)
    i, j = (c + 1 for c in components)
    path = Path(path)
    visualizer = Visualizer(path.parent)
    plot_data = visualizer.scatter_data(points, group_labels, axis_labels=(f"U^({i})", f"U^({j})"))
    return visualizer.save(visualizer.render_svg(plot_data), path.name)


def scatter_filename(components: Sequence[int]) -> str:
    """Default file name for a component pair, e.g. ``scatter_1_2.svg``."""
    return "scatter_" + "_".join(str(c + 1) for c in components) + ".svg"
