"""Kernels on matrix-valued blocks and bandwidth selection."""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.spatial.distance import pdist

from rmcca.core.exceptions import (
    DegenerateDistancesError,
    InsufficientUnitsError,
    InvalidValueError,
    NonFiniteError,
    ShapeMismatchError,
)
from rmcca.core.types import RepeatedMeasuresDataset

KERNEL_KINDS = ("gaussian", "linear")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel applied to the blocks of one feature.

    Args:
        kind: "gaussian" (exp(-gamma ||A - B||_F^2)) or "linear" (<A, B>_F)
        gamma: Positive bandwidth, gaussian only
    """

    kind: str = "gaussian"
    gamma: Optional[float] = None

    def __post_init__(self):
        """Validate the kernel parameters."""
        if self.kind not in KERNEL_KINDS:
            raise InvalidValueError(f"unknown kernel '{self.kind}'", {"choices": KERNEL_KINDS})
        if self.kind == "gaussian":
            if self.gamma is None or not np.isfinite(self.gamma) or self.gamma <= 0:
                raise InvalidValueError("gaussian kernel needs gamma > 0", {"gamma": self.gamma})

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {"kind": self.kind, "gamma": self.gamma}


def _check_pair(a: np.ndarray, b: np.ndarray):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ShapeMismatchError("kernel arguments differ in shape", {"a": a.shape, "b": b.shape})
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NonFiniteError("kernel argument contains NaN or Inf")
    return a, b


def gaussian_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||A - B||_F^2), a value in (0, 1]."""
    if not gamma > 0:
        raise InvalidValueError("gamma must be positive", {"gamma": gamma})
    a, b = _check_pair(a, b)
    return float(np.exp(-gamma * np.sum((a - b) ** 2)))


def linear_kernel(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius inner product <A, B>_F."""
    a, b = _check_pair(a, b)
    return float(np.sum(a * b))


def median_gamma(blocks: Union[np.ndarray, Sequence[np.ndarray]]) -> float:
    """Median heuristic: 1 / median of pairwise squared Frobenius distances.

    The median of an even-length list is its lower middle element.

    Raises:
        InsufficientUnitsError: If fewer than two blocks are given
        DegenerateDistancesError: If the median distance is zero
    """
    flat = np.asarray([np.asarray(block, dtype=float).ravel() for block in blocks])
    if flat.shape[0] < 2:
        raise InsufficientUnitsError("median heuristic needs at least two blocks", {"n": flat.shape[0]})
    if not np.all(np.isfinite(flat)):
        raise NonFiniteError("block contains NaN or Inf")
    distances = np.sort(pdist(flat, "sqeuclidean"))
    median = distances[(distances.size - 1) // 2]
    if median <= 0.0:
        raise DegenerateDistancesError("median pairwise distance is zero", {"pairs": int(distances.size)})
    return float(1.0 / median)


def kernel_matrix(flat: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Gram matrix of row vectors (flattened blocks) under ``spec``."""
    flat = np.asarray(flat, dtype=float)
    if spec.kind == "linear":
        gram = flat @ flat.T
        return 0.5 * (gram + gram.T)
    sq = np.zeros((flat.shape[0], flat.shape[0]))
    iu = np.triu_indices(flat.shape[0], k=1)
    sq[iu] = pdist(flat, "sqeuclidean")
    sq = sq + sq.T
    return np.exp(-spec.gamma * sq)


def resolve_kernel_specs(
    dataset: RepeatedMeasuresDataset,
    kind: str = "gaussian",
    gamma: Union[float, str, None] = "median",
) -> List[KernelSpec]:
    """One KernelSpec per feature, applying the median heuristic when asked."""
    if kind == "linear":
        return [KernelSpec("linear") for _ in range(dataset.L)]
    specs = []
    for l in range(dataset.L):
        if gamma is None or gamma == "median":
            specs.append(KernelSpec("gaussian", median_gamma(dataset.blocks[l])))
        else:
            specs.append(KernelSpec("gaussian", float(gamma)))
    return specs
