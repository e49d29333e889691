"""Dataset ingestion and result files."""

from rmcca.io.dataset import load_dataset, parse_dataset, serialize_dataset, write_dataset
from rmcca.io.report import (
    read_points,
    read_report,
    read_scores_csv,
    write_json,
    write_report,
    write_scores_csv,
    write_weight_curves,
)

__all__ = [
    "load_dataset",
    "parse_dataset",
    "serialize_dataset",
    "write_dataset",
    "read_points",
    "read_report",
    "read_scores_csv",
    "write_json",
    "write_report",
    "write_scores_csv",
    "write_weight_curves",
]
