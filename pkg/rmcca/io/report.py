"""Report, score and weight-curve files of an analysis."""

import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from rmcca.core.config import AnalysisConfig
from rmcca.core.exceptions import InputFileError, OutputFileError, SchemaError
from rmcca.core.types import MccaSolution
from rmcca.core.utils import to_serializable
from rmcca.evaluation.hopkins import HopkinsResult
from rmcca.methods.functional.solver import weight_curve_grid

SCORE_COLUMNS = ["unit", "component", "feature", "score"]
CURVE_COLUMNS = ["component", "feature", "variable", "t", "value"]
CURVE_POINTS = 201


def _write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputFileError(f"cannot write {path}", {"path": str(path), "error": str(e)})
    return path


def _read_text(path: Union[str, Path]) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}", {"path": str(path), "error": str(e)})


def _frame_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def solution_document(
    solution: MccaSolution,
    hopkins: Optional[Union[HopkinsResult, Sequence[HopkinsResult]]] = None,
    config: Optional[AnalysisConfig] = None,
) -> Dict[str, Any]:
    """Machine-readable document of a solution."""
    document: Dict[str, Any] = {
        "method": solution.method.value,
        "epsilon": solution.epsilon_used,
        "n_components": solution.n_components,
        "correlations": [float(r) for r in solution.correlations],
        "diagnostics": solution.diagnostics.to_dict(),
        "params": to_serializable(solution.params),
        "features": list(solution.feature_names),
        "weights": {
            name: [solution.weights[l][:, c].tolist() for c in range(solution.n_components)]
            for l, name in enumerate(solution.feature_names)
        },
        "scores": [
            {
                "unit": unit,
                **({"group": solution.group_labels[k]} if solution.group_labels is not None else {}),
                "values": solution.scores[:, k, :].tolist(),
            }
            for k, unit in enumerate(solution.unit_labels)
        ],
    }
    if config is not None:
        document["config"] = config.to_dict()
    if hopkins is not None:
        if isinstance(hopkins, HopkinsResult):
            document["clusterability"] = hopkins.to_dict()
        else:
            document["clusterability"] = [dict(r.to_dict(), components=k + 1) for k, r in enumerate(hopkins)]
    return document


def write_report(
    solution: MccaSolution,
    hopkins: Optional[Union[HopkinsResult, Sequence[HopkinsResult]]],
    path: Union[str, Path],
    config: Optional[AnalysisConfig] = None,
) -> Path:
    """Write the JSON report; the clusterability section is omitted without Hopkins results."""
    document = solution_document(solution, hopkins, config)
    return _write_text(path, json.dumps(document, indent=2) + "\n")


def write_json(document: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Write any JSON-compatible document."""
    return _write_text(path, json.dumps(to_serializable(document), indent=2) + "\n")


def read_report(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON report back into a dictionary."""
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not a JSON report", {"error": str(e)})


def write_scores_csv(solution: MccaSolution, path: Union[str, Path]) -> Path:
    """Write ``unit,component,feature,score`` rows; components are 1-based."""
    records = [
        (unit, c + 1, feature, repr(float(solution.scores[c, k, l])))
        for c in range(solution.n_components)
        for k, unit in enumerate(solution.unit_labels)
        for l, feature in enumerate(solution.feature_names)
    ]
    return _write_text(path, _frame_csv(pd.DataFrame(records, columns=SCORE_COLUMNS)))


def read_scores_csv(path: Union[str, Path]) -> Tuple[np.ndarray, List[str], List[str]]:
    """Read a scores CSV.

    Returns:
        Tuple of (scores (K, n, L), unit labels, feature names)
    """
    frame = _parse_csv(_read_text(path), path)
    if list(frame.columns) != SCORE_COLUMNS:
        raise SchemaError("scores file must have header unit,component,feature,score", {"found": list(frame.columns)})
    return _scores_from_frame(frame)


def _parse_csv(text: str, path: Union[str, Path], **kwargs) -> pd.DataFrame:
    if not text.strip():
        raise SchemaError(f"{path} is empty")
    try:
        return pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, **kwargs)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SchemaError(f"cannot parse {path} as CSV", {"error": str(e).strip()})


def _scores_from_frame(frame: pd.DataFrame) -> Tuple[np.ndarray, List[str], List[str]]:
    if frame.empty:
        raise SchemaError("scores file has a header but no rows")
    units = list(pd.unique(frame["unit"]))
    features = list(pd.unique(frame["feature"]))
    try:
        components = frame["component"].astype(int).to_numpy()
        values = np.array([float(v) for v in frame["score"]])
    except ValueError as e:
        raise SchemaError("scores file has a non-numeric component or score", {"error": str(e)})
    if components.min() < 1:
        raise SchemaError("components are numbered from 1")

    scores = np.full((int(components.max()), len(units), len(features)), np.nan)
    unit_pos = {u: i for i, u in enumerate(units)}
    feature_pos = {f: i for i, f in enumerate(features)}
    scores[components - 1, frame["unit"].map(unit_pos).to_numpy(), frame["feature"].map(feature_pos).to_numpy()] = values
    if np.isnan(scores).any():
        raise SchemaError("scores file does not cover every (component, unit, feature) cell")
    return scores, units, features


def read_points(path: Union[str, Path]) -> Tuple[Optional[np.ndarray], np.ndarray]:
    """Read either a scores CSV or a plain numeric matrix.

    Returns:
        Tuple of (scores (K, n, L) or None, points n x d). For a scores CSV the
        points are left to the caller's component selection and are empty.
    """
    frame = _parse_csv(_read_text(path), path, header=None)
    if [str(v).strip() for v in frame.iloc[0]] == SCORE_COLUMNS:
        body = frame.iloc[1:].reset_index(drop=True)
        body.columns = SCORE_COLUMNS
        scores, _, _ = _scores_from_frame(body)
        return scores, np.empty((0, 0))

    rows = frame
    try:
        float(str(frame.iloc[0, 0]))
    except ValueError:
        rows = frame.iloc[1:]
    if rows.empty:
        raise SchemaError(f"{path} has a header but no rows")
    if rows.isna().to_numpy().any():
        raise SchemaError(f"{path} has rows of different lengths")
    try:
        points = rows.to_numpy(dtype=str).astype(float)
    except ValueError as e:
        raise SchemaError(f"{path} is neither a scores file nor a numeric matrix", {"error": str(e)})
    return None, points


def weight_curve_frame(solution: MccaSolution, basis_size: int, points: int = CURVE_POINTS) -> pd.DataFrame:
    """Sampled weight functions with 1-based component and variable indices."""
    rows = [
        (c + 1, solution.feature_names[l], v + 1, t, value)
        for c, l, v, t, value in weight_curve_grid(solution, basis_size, points)
    ]
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def write_weight_curves(solution: MccaSolution, basis_size: int, path: Union[str, Path]) -> Path:
    """Write ``component,feature,variable,t,value`` curves on a 201-point grid."""
    frame = weight_curve_frame(solution, basis_size)
    frame["t"] = frame["t"].map(repr)
    frame["value"] = frame["value"].map(repr)
    return _write_text(path, _frame_csv(frame))
