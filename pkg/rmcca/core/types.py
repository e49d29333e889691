"""Common types shared by both MCCA variants."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from rmcca.core.exceptions import (
    InconsistentShapeError,
    InvalidComponentIndexError,
    InvalidValueError,
    NonNumericValueError,
)


class Method(str, Enum):
    """Multiple CCA variant."""

    KERNEL = "kernel"
    FUNCTIONAL = "functional"


@dataclass
class RepeatedMeasuresDataset:
    """n experimental units observed on L feature blocks.

    Block ``blocks[l][k]`` is the T x p_l matrix A_l[k] of p_l variables
    observed at T time points for unit k.

    Attributes:
        blocks: One array of shape (n, T, p_l) per feature
        unit_labels: n unit identifiers
        feature_names: L feature identifiers
        group_labels: Optional external grouping of the units
        variable_names: Per feature, p_l variable identifiers
        time_labels: T time identifiers
    """

    blocks: List[np.ndarray]
    unit_labels: List[str]
    feature_names: List[str]
    group_labels: Optional[List[str]] = None
    variable_names: Optional[List[List[str]]] = None
    time_labels: Optional[List[str]] = None

    def __post_init__(self):
        """Validate shapes and values."""
        self.blocks = [np.asarray(block, dtype=float) for block in self.blocks]
        if len(self.blocks) < 2:
            raise InvalidValueError("at least two features are required (L >= 2)", {"L": len(self.blocks)})
        if len(self.feature_names) != len(self.blocks):
            raise InconsistentShapeError("feature name count does not match block count")

        for name, block in zip(self.feature_names, self.blocks):
            if block.ndim != 3:
                raise InconsistentShapeError(f"feature '{name}' must be an (n, T, p) array", {"shape": block.shape})
            if not np.all(np.isfinite(block)):
                raise NonNumericValueError(f"feature '{name}' contains non-finite values")

        n, t = self.blocks[0].shape[:2]
        for name, block in zip(self.feature_names, self.blocks):
            if block.shape[:2] != (n, t):
                raise InconsistentShapeError(
                    f"feature '{name}' disagrees on unit or time count",
                    {"expected": (n, t), "found": block.shape[:2]},
                )
            if block.shape[2] < 1:
                raise InconsistentShapeError(f"feature '{name}' has no variables")
        if n < 3:
            raise InvalidValueError("at least three units are required (n >= 3)", {"n": n})
        if t < 1:
            raise InvalidValueError("at least one time point is required", {"T": t})
        if len(self.unit_labels) != n:
            raise InconsistentShapeError("unit label count does not match n", {"n": n})
        if self.group_labels is not None and len(self.group_labels) != n:
            raise InconsistentShapeError("group label count does not match n", {"n": n})

        if self.variable_names is None:
            self.variable_names = [[str(j + 1) for j in range(b.shape[2])] for b in self.blocks]
        if self.time_labels is None:
            self.time_labels = [str(j + 1) for j in range(t)]

    @property
    def n(self) -> int:
        """Number of units."""
        return self.blocks[0].shape[0]

    @property
    def L(self) -> int:
        """Number of features."""
        return len(self.blocks)

    @property
    def T(self) -> int:
        """Number of time points."""
        return self.blocks[0].shape[1]

    @property
    def p(self) -> List[int]:
        """Per-feature variable counts."""
        return [block.shape[2] for block in self.blocks]

    def block(self, feature: int, unit: int) -> np.ndarray:
        """Return A_l[k] as a T x p_l matrix."""
        return self.blocks[feature][unit]

    def flattened(self, feature: int) -> np.ndarray:
        """Return the feature's blocks as an (n, T * p_l) matrix."""
        block = self.blocks[feature]
        return block.reshape(block.shape[0], -1)

    def standardized(self) -> "RepeatedMeasuresDataset":
        """Z-score every (feature, variable) over all units and times.

        Zero-variance variables are only centered.
        """
        scaled = []
        for block in self.blocks:
            mean = block.mean(axis=(0, 1), keepdims=True)
            std = block.std(axis=(0, 1), keepdims=True)
            std = np.where(std > 0.0, std, 1.0)
            scaled.append((block - mean) / std)
        return replace(self, blocks=scaled)

    def reordered(self, order: Sequence[int]) -> "RepeatedMeasuresDataset":
        """Return the dataset with units permuted by ``order``."""
        order = list(order)
        return replace(
            self,
            blocks=[block[order] for block in self.blocks],
            unit_labels=[self.unit_labels[i] for i in order],
            group_labels=None if self.group_labels is None else [self.group_labels[i] for i in order],
        )

    def equals(self, other: "RepeatedMeasuresDataset") -> bool:
        """Label-aligned equality: units and features are matched by label."""
        if sorted(self.unit_labels) != sorted(other.unit_labels):
            return False
        if sorted(self.feature_names) != sorted(other.feature_names):
            return False
        if self.time_labels != other.time_labels:
            return False
        unit_pos = {label: i for i, label in enumerate(other.unit_labels)}
        order = [unit_pos[label] for label in self.unit_labels]
        for l, name in enumerate(self.feature_names):
            j = other.feature_names.index(name)
            if self.variable_names[l] != other.variable_names[j]:
                return False
            if not np.array_equal(self.blocks[l], other.blocks[j][order]):
                return False
        if (self.group_labels is None) != (other.group_labels is None):
            return False
        if self.group_labels is not None:
            if self.group_labels != [other.group_labels[i] for i in order]:
                return False
        return True

    def summary(self) -> Dict[str, Any]:
        """Shape summary for logs and reports."""
        return {"n": self.n, "L": self.L, "T": self.T, "p": self.p, "features": list(self.feature_names)}


@dataclass
class SolverDiagnostics:
    """Solver metadata carried into reports.

    Attributes:
        deflated_rank: Dimension kept after truncating the null space of B
        block_ranks: Retained rank per feature block
        degenerate: Per returned component, whether its eigenvalue is tied
        constraint_residuals: |sum_l w_l^T B_l w_l - L| per component
        warnings: Human-readable warnings (low Gram rank, ties)
    """

    deflated_rank: int
    block_ranks: List[int] = field(default_factory=list)
    degenerate: List[bool] = field(default_factory=list)
    constraint_residuals: List[float] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "deflated_rank": self.deflated_rank,
            "block_ranks": list(self.block_ranks),
            "degenerate": list(self.degenerate),
            "constraint_residuals": [float(r) for r in self.constraint_residuals],
            "warnings": list(self.warnings),
        }


@dataclass
class MccaSolution:
    """Leading components of a multiple CCA fit.

    Attributes:
        correlations: Generalized canonical correlations, non-increasing
        weights: Per feature, an array (dim_l, K) whose columns are w_l
        scores: Array (K, n, L) of canonical scores U^(l)(unit)
        epsilon_used: Regularization actually applied
        method: Kernel or functional
        diagnostics: Solver metadata
        unit_labels: Unit identifiers, score row order
        feature_names: Feature identifiers, score column order
        group_labels: Optional external grouping of the units
        params: Method parameters (kernels, basis size, ...) for the report
    """

    correlations: np.ndarray
    weights: List[np.ndarray]
    scores: np.ndarray
    epsilon_used: float
    method: Method
    diagnostics: SolverDiagnostics
    unit_labels: List[str] = field(default_factory=list)
    feature_names: List[str] = field(default_factory=list)
    group_labels: Optional[List[str]] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_components(self) -> int:
        """Number of returned components K."""
        return int(self.correlations.size)

    def component_weights(self, component: int) -> List[np.ndarray]:
        """Weight vectors w_1..w_L of one component."""
        self._check_component(component)
        return [w[:, component] for w in self.weights]

    def _check_component(self, component: int) -> None:
        if not 0 <= component < self.n_components:
            raise InvalidComponentIndexError(
                f"component {component + 1} out of range",
                {"available": self.n_components},
            )


def canonical_points(
    scores: np.ndarray,
    components: Sequence[int],
    feature: Optional[int] = None,
) -> np.ndarray:
    """Build one point per unit from the selected components.

    Each coordinate is the mean of the L feature scores of a component, or the
    score of one feature when ``feature`` is given.

    Args:
        scores: Array (K, n, L) of canonical scores
        components: 0-based component indices
        feature: Optional 0-based feature index

    Returns:
        Array (n, len(components))
    """
    scores = np.asarray(scores, dtype=float)
    n_components = scores.shape[0]
    for c in components:
        if not 0 <= c < n_components:
            raise InvalidComponentIndexError(f"component {c + 1} out of range", {"available": n_components})
    if feature is not None and not 0 <= feature < scores.shape[2]:
        raise InvalidValueError(f"feature index {feature + 1} out of range", {"available": scores.shape[2]})

    selected = scores[list(components)]
    if feature is None:
        columns = selected.mean(axis=2)
    else:
        columns = selected[:, :, feature]
    return columns.T.copy()
