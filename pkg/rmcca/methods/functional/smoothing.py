"""Least-squares basis smoothing and coefficient covariances."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg as sla

from rmcca.core.exceptions import (
    DimensionMismatchError,
    InsufficientUnitsError,
    NonFiniteError,
    SingularDesignError,
    UnderdeterminedFitError,
)
from rmcca.core.types import RepeatedMeasuresDataset
from rmcca.logging import EventType, RunLogger
from rmcca.methods.functional.basis import BasisSpec

MAX_DESIGN_CONDITION = 1e12


def _checked_design(basis: BasisSpec, n_times: int) -> np.ndarray:
    if n_times != basis.n_times:
        raise DimensionMismatchError("block time count differs from the basis grid", {"T": n_times, "grid": basis.n_times})
    if n_times < basis.size:
        raise UnderdeterminedFitError(
            f"T = {n_times} time points cannot determine B = {basis.size} basis coefficients",
            {"T": n_times, "B": basis.size},
        )
    design = basis.design()
    condition = np.linalg.cond(design.T @ design)
    if not condition <= MAX_DESIGN_CONDITION:
        raise SingularDesignError("basis design matrix is ill-conditioned", {"condition": float(condition)})
    return design


def smooth_block(block: np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Least-squares coefficients of a T x p block, variable-major.

    Returns:
        Vector of length p * B: the B coefficients of variable 1, then of
        variable 2, and so on
    """
    block = np.asarray(block, dtype=float)
    if block.ndim == 1:
        block = block[:, None]
    if not np.all(np.isfinite(block)):
        raise NonFiniteError("block contains NaN or Inf")
    design = _checked_design(basis, block.shape[0])
    coeffs, *_ = sla.lstsq(design, block)
    return coeffs.T.ravel()


@dataclass
class CoefficientSet:
    """Smoothed coefficients of every unit and feature.

    Attributes:
        coefficients: Per feature, an (n, p_l * B) array of variable-major rows
        basis: Basis used for smoothing
    """

    coefficients: List[np.ndarray]
    basis: BasisSpec

    @property
    def n(self) -> int:
        """Number of units."""
        return self.coefficients[0].shape[0]

    @property
    def L(self) -> int:
        """Number of features."""
        return len(self.coefficients)

    def fitted(self, feature: int) -> np.ndarray:
        """Smoothed curves on the grid as an (n, T, p_l) array."""
        coeffs = self.coefficients[feature]
        n, size = coeffs.shape[0], self.basis.size
        per_variable = coeffs.reshape(n, -1, size)
        return np.einsum("tb,npb->ntp", self.basis.design(), per_variable)


def smooth_dataset(
    dataset: RepeatedMeasuresDataset,
    basis: BasisSpec,
    logger: Optional[RunLogger] = None,
) -> CoefficientSet:
    """Smooth every block of every feature onto ``basis``."""
    design = _checked_design(basis, dataset.T)
    coefficients = []
    for block in dataset.blocks:
        n, t, p = block.shape
        stacked = block.transpose(1, 0, 2).reshape(t, n * p)
        coeffs, *_ = sla.lstsq(design, stacked)
        coefficients.append(coeffs.reshape(basis.size, n, p).transpose(1, 2, 0).reshape(n, p * basis.size))

    if logger:
        logger.log(EventType.BASIS_FIT, {"B": basis.size, "T": dataset.T, "dims": [c.shape[1] for c in coefficients]})
    return CoefficientSet(coefficients=coefficients, basis=basis)


@dataclass
class CoeffCovariances:
    """Sample cross-covariances of the coefficient vectors.

    Attributes:
        blocks: blocks[i][j] is C_ij of shape (dim_i, dim_j); C_ji is C_ij^T
        ddof: Delta degrees of freedom of the estimator (1: divide by n - 1)
    """

    blocks: List[List[np.ndarray]] = field(default_factory=list)
    ddof: int = 1

    @property
    def L(self) -> int:
        """Number of features."""
        return len(self.blocks)

    def __getitem__(self, index):
        i, j = index
        return self.blocks[i][j]


def coeff_covariances(views: List[np.ndarray], ddof: int = 1) -> CoeffCovariances:
    """Cross-covariances 1/(n - ddof) sum_k (c_i[k] - mean_i)(c_j[k] - mean_j)^T.

    Args:
        views: Per feature, an (n, dim_l) array (a CoefficientSet's coefficients)
        ddof: 1 for the unbiased estimator, 0 for division by n
    """
    if isinstance(views, CoefficientSet):
        views = views.coefficients
    n = views[0].shape[0]
    if n < 2 or n - ddof < 1:
        raise InsufficientUnitsError("covariance estimation needs at least two units", {"n": n})
    if any(v.shape[0] != n for v in views):
        raise DimensionMismatchError("views disagree on the unit count")

    centered = [np.asarray(v, dtype=float) - np.asarray(v, dtype=float).mean(axis=0) for v in views]
    count = len(views)
    blocks = [[None] * count for _ in range(count)]
    for i in range(count):
        for j in range(i, count):
            cov = centered[i].T @ centered[j] / (n - ddof)
            if i == j:
                cov = 0.5 * (cov + cov.T)
            blocks[i][j] = cov
            blocks[j][i] = cov.T
    return CoeffCovariances(blocks=blocks, ddof=ddof)
