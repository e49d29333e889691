"""Long-format CSV ingestion and serialization of repeated-measures datasets.

Schema: ``unit,feature,time,variable,value`` plus an optional ``group``
column, one measurement per row.
"""

import io
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from rmcca.core.exceptions import (
    DuplicateCellError,
    InconsistentShapeError,
    InputFileError,
    InvalidValueError,
    MissingCellError,
    NonNumericValueError,
    OutputFileError,
    SchemaError,
)
from rmcca.core.types import RepeatedMeasuresDataset

REQUIRED_COLUMNS = ["unit", "feature", "time", "variable", "value"]
OPTIONAL_COLUMNS = ["group"]
KEY_COLUMNS = ["unit", "feature", "time", "variable"]


def _first_appearance(values: pd.Series) -> List[str]:
    return list(pd.unique(values))


def _index_order(values: pd.Series) -> List[str]:
    """Integer-like labels sort numerically, anything else keeps first appearance."""
    labels = _first_appearance(values)
    numbers = pd.to_numeric(pd.Series(labels), errors="coerce")
    if numbers.notna().all() and np.all(numbers == np.round(numbers)):
        return [label for _, label in sorted(zip(numbers, labels), key=lambda pair: pair[0])]
    return labels


def _read_frame(csv_text: str) -> pd.DataFrame:
    if not csv_text.strip():
        raise SchemaError("dataset is empty", {"expected": REQUIRED_COLUMNS})
    try:
        frame = pd.read_csv(io.StringIO(csv_text), dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SchemaError("cannot parse dataset CSV", {"error": str(e)})

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    unknown = [c for c in frame.columns if c not in REQUIRED_COLUMNS + OPTIONAL_COLUMNS]
    if missing or unknown:
        raise SchemaError(
            "dataset header must be unit,feature,time,variable,value[,group]",
            {"missing": missing, "unknown": unknown},
        )
    if frame.empty:
        raise SchemaError("dataset has a header but no rows")
    return frame.apply(lambda column: column.str.strip())


def _to_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return float("nan")


def _coordinates(row: pd.Series) -> Dict[str, str]:
    return {key: row[key] for key in KEY_COLUMNS}


def parse_dataset(csv_text: str) -> RepeatedMeasuresDataset:
    """Parse a long-format CSV document into a validated dataset.

    Units and features are indexed by first appearance; times and variables
    sort numerically when they are integers, otherwise by first appearance.

    Raises:
        SchemaError: Wrong or missing header
        NonNumericValueError: A value is not a finite number (names the row)
        DuplicateCellError: A (unit, feature, time, variable) cell appears twice
        InconsistentShapeError: A feature's variable set differs across units
        MissingCellError: A cell implied by the cross product is absent
    """
    frame = _read_frame(csv_text)

    values = frame["value"].map(_to_float)
    bad = ~np.isfinite(values.to_numpy(dtype=float))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonNumericValueError(
            f"row {i + 2}: value '{frame['value'].iloc[i]}' is not a finite number",
            {"row": i + 2, **_coordinates(frame.iloc[i])},
        )

    duplicated = frame.duplicated(subset=KEY_COLUMNS)
    if duplicated.any():
        i = int(np.flatnonzero(duplicated.to_numpy())[0])
        raise DuplicateCellError(f"row {i + 2}: duplicate cell", {"row": i + 2, **_coordinates(frame.iloc[i])})

    units = _first_appearance(frame["unit"])
    features = _first_appearance(frame["feature"])
    times = _index_order(frame["time"])
    unit_pos = {u: i for i, u in enumerate(units)}
    time_pos = {t: i for i, t in enumerate(times)}

    group_labels: Optional[List[str]] = None
    if "group" in frame.columns:
        groups = frame.groupby("unit", sort=False)["group"].unique()
        for unit, labels in groups.items():
            if len(labels) > 1:
                raise InvalidValueError(f"unit '{unit}' has more than one group", {"unit": unit, "groups": list(labels)})
        group_labels = [groups[u][0] for u in units]

    blocks = []
    variable_names = []
    for feature in features:
        rows = frame[frame["feature"] == feature]
        variables = _index_order(rows["variable"])
        for unit in units:
            present = rows.loc[rows["unit"] == unit, "variable"]
            if present.empty:
                raise MissingCellError(f"unit '{unit}' has no rows for feature '{feature}'", {"unit": unit, "feature": feature})
            if set(present) != set(variables):
                raise InconsistentShapeError(
                    f"feature '{feature}' has a different variable set for unit '{unit}'",
                    {"unit": unit, "feature": feature, "variables": sorted(set(present)), "expected": variables},
                )

        var_pos = {v: i for i, v in enumerate(variables)}
        expected = len(units) * len(times) * len(variables)
        if len(rows) != expected:
            seen = set(zip(rows["unit"], rows["time"], rows["variable"]))
            for unit in units:
                for time in times:
                    for variable in variables:
                        if (unit, time, variable) not in seen:
                            raise MissingCellError(
                                "missing cell",
                                {"unit": unit, "feature": feature, "time": time, "variable": variable},
                            )

        block = np.empty((len(units), len(times), len(variables)))
        block[
            rows["unit"].map(unit_pos).to_numpy(),
            rows["time"].map(time_pos).to_numpy(),
            rows["variable"].map(var_pos).to_numpy(),
        ] = values[rows.index].to_numpy(dtype=float)
        blocks.append(block)
        variable_names.append(variables)

    return RepeatedMeasuresDataset(
        blocks=blocks,
        unit_labels=units,
        feature_names=features,
        group_labels=group_labels,
        variable_names=variable_names,
        time_labels=times,
    )


def serialize_dataset(dataset: RepeatedMeasuresDataset) -> str:
    """Long-format CSV text; values use the shortest round-trip representation."""
    records = []
    for l, feature in enumerate(dataset.feature_names):
        block = dataset.blocks[l]
        for k, unit in enumerate(dataset.unit_labels):
            for t, time in enumerate(dataset.time_labels):
                for v, variable in enumerate(dataset.variable_names[l]):
                    record = {
                        "unit": unit,
                        "feature": feature,
                        "time": time,
                        "variable": variable,
                        "value": repr(float(block[k, t, v])),
                    }
                    if dataset.group_labels is not None:
                        record["group"] = dataset.group_labels[k]
                    records.append(record)
    columns = REQUIRED_COLUMNS + (OPTIONAL_COLUMNS if dataset.group_labels is not None else [])
    return pd.DataFrame(records, columns=columns).to_csv(index=False, lineterminator="\n")


def load_dataset(path: Union[str, Path]) -> RepeatedMeasuresDataset:
    """Read and parse a dataset file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read dataset file {path}", {"path": str(path), "error": str(e)})
    return parse_dataset(text)


def write_dataset(dataset: RepeatedMeasuresDataset, path: Union[str, Path]) -> Path:
    """Serialize a dataset to ``path``."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_dataset(dataset), encoding="utf-8")
    except OSError as e:
        raise OutputFileError(f"cannot write dataset file {path}", {"path": str(path), "error": str(e)})
    return path
