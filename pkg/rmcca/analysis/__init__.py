"""Plotting of canonical scores."""

from rmcca.analysis.visualizer import Visualizer, scatter_filename, write_scatter

__all__ = [
    "Visualizer",
    "scatter_filename",
    "write_scatter",
]
