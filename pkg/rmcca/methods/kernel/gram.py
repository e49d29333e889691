"""Gram matrices of the feature blocks and their centering."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from rmcca.core.exceptions import DimensionMismatchError, NonFiniteError
from rmcca.core.types import RepeatedMeasuresDataset
from rmcca.logging import EventType, RunLogger
from rmcca.methods.kernel.kernels import KernelSpec, kernel_matrix


@dataclass
class GramSet:
    """Raw and centered Gram matrices, one pair per feature.

    Attributes:
        raw: L matrices G_l with (G_l)_ij = K_l(A_l[i], A_l[j])
        centered: L matrices H G_l H
        kernel_specs: Kernel used for each feature
    """

    raw: List[np.ndarray]
    centered: List[np.ndarray]
    kernel_specs: List[KernelSpec]

    @property
    def n(self) -> int:
        """Number of units."""
        return self.raw[0].shape[0]

    @property
    def L(self) -> int:
        """Number of features."""
        return len(self.raw)


def centering_matrix(n: int) -> np.ndarray:
    """H = I - (1/n) 11^T."""
    return np.eye(n) - np.full((n, n), 1.0 / n)


def center_gram(gram: np.ndarray) -> np.ndarray:
    """Return H G H, symmetrized."""
    h = centering_matrix(gram.shape[0])
    centered = h @ gram @ h
    return 0.5 * (centered + centered.T)


def gram_set(
    dataset: RepeatedMeasuresDataset,
    specs: Sequence[KernelSpec],
    logger: Optional[RunLogger] = None,
) -> GramSet:
    """Compute and center the Gram matrix of every feature.

    Args:
        dataset: Validated dataset
        specs: One kernel per feature
        logger: Optional run logger

    Returns:
        GramSet
    """
    if len(specs) != dataset.L:
        raise DimensionMismatchError("one kernel per feature is required", {"L": dataset.L, "kernels": len(specs)})

    raw, centered = [], []
    for l, spec in enumerate(specs):
        gram = kernel_matrix(dataset.flattened(l), spec)
        if not np.all(np.isfinite(gram)):
            raise NonFiniteError(f"Gram matrix of feature '{dataset.feature_names[l]}' is not finite")
        raw.append(gram)
        centered.append(center_gram(gram))

    if logger:
        logger.log(
            EventType.GRAM_BUILT,
            {"n": dataset.n, "L": dataset.L, "kernels": [s.kind for s in specs]},
            gammas=[s.gamma for s in specs],
        )
    return GramSet(raw=raw, centered=centered, kernel_specs=list(specs))
