"""Shared utility functions for rmcca."""

import hashlib
import json
import math
from datetime import datetime
from typing import Any, List, Sequence

import numpy as np

from rmcca.core.exceptions import InvalidValueError


def generate_run_id(prefix: str = "run", payload: str = "") -> str:
    """Generate a run ID from a prefix and a content digest.

    The digest depends only on ``payload`` so identical invocations share
    an ID.
    """
    digest = hashlib.md5(payload.encode()).hexdigest()[:8]
    return f"{prefix}_{digest}"


def to_serializable(obj: Any) -> Any:
    """Convert numpy containers and scalars into plain Python values."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(v) for v in obj]
    return obj


def safe_json_dumps(obj: Any, **kwargs) -> str:
    """Dump object to JSON, handling numpy, datetime and dataclass-like types."""

    def default_handler(o):
        if isinstance(o, datetime):
            return o.isoformat()
        if isinstance(o, (np.ndarray, np.generic)):
            return to_serializable(o)
        if hasattr(o, "to_dict"):
            return o.to_dict()
        if hasattr(o, "__dict__"):
            return o.__dict__
        return str(o)

    return json.dumps(obj, default=default_handler, **kwargs)


def auto_epsilon(n: int) -> float:
    """Regularization schedule eps_n = n^(-1/4).

    Satisfies eps_n -> 0 and n^(1/3) * eps_n = n^(1/12) -> infinity.
    """
    if n < 1:
        raise InvalidValueError("sample size must be positive", {"n": n})
    return float(n) ** -0.25


def parse_index_list(text: str) -> List[int]:
    """Parse a 1-based selection such as ``"1,2,5-7"`` into 0-based indices."""
    indices: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = (int(v) for v in part.split("-", 1))
                indices.extend(range(lo - 1, hi))
            else:
                indices.append(int(part) - 1)
        except ValueError:
            raise InvalidValueError(f"invalid index selection '{text}'", {"part": part})
    if not indices or min(indices) < 0:
        raise InvalidValueError(f"invalid index selection '{text}'")
    return indices


def relative_gap_flags(values: Sequence[float], rel_tol: float = 1e-8) -> List[bool]:
    """Flag i when |values[i] - values[i+1]| < rel_tol * |values[0]|."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return []
    scale = abs(values[0]) if values[0] != 0 else 1.0
    return [bool(abs(values[i] - values[i + 1]) < rel_tol * scale) for i in range(values.size - 1)]


def ceil_tenth(n: int) -> int:
    """Default Hopkins probe count ceil(n / 10)."""
    return max(1, math.ceil(n / 10))
