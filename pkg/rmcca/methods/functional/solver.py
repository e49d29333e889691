"""Regularized multiple functional CCA on basis coefficients.

With coefficient covariances C_ij the problem is M w = rho B w where
M_ij = C_ij (i != j) and B_ll = C_ll + eps I, normalized so that
sum_l w_l^T B_l w_l = L. The same solver runs on any set of vector views,
which gives primal multiple linear CCA for ddof = 0.
"""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from rmcca.core.exceptions import DimensionMismatchError, InvalidValueError, InvalidVariableIndexError
from rmcca.core.linalg import DEFAULT_TRUNCATION_TOL, solve_generalized_sym
from rmcca.core.types import MccaSolution, Method, RepeatedMeasuresDataset, SolverDiagnostics
from rmcca.logging import EventType, RunLogger
from rmcca.methods.common import assemble_blocks, normalized_weights
from rmcca.methods.functional.basis import BasisSpec, fourier_basis
from rmcca.methods.functional.smoothing import CoeffCovariances, coeff_covariances, smooth_dataset


def _diagonal_blocks(covs: CoeffCovariances, epsilon: float) -> List[np.ndarray]:
    return [covs[l, l] + epsilon * np.eye(covs[l, l].shape[0]) for l in range(covs.L)]


def assemble_functional_problem(covs: CoeffCovariances, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
    """Assemble (M, B) from coefficient covariances.

    Args:
        covs: Cross-covariances of the coefficient vectors
        epsilon: Ridge added to each diagonal block, non-negative

    Returns:
        Tuple of symmetric M and block-diagonal B
    """
    if not epsilon >= 0:
        raise InvalidValueError("epsilon must be non-negative", {"epsilon": epsilon})
    count = covs.L
    cross = [[covs[i, j] for j in range(count)] for i in range(count)]
    return assemble_blocks(cross, _diagonal_blocks(covs, epsilon))


def _solve_views(
    views: Sequence[np.ndarray],
    epsilon: float,
    k: int,
    ddof: int,
    truncation_tol: float,
    eig_method: str,
) -> Tuple[np.ndarray, List[np.ndarray], np.ndarray, SolverDiagnostics]:
    if not epsilon > 0:
        raise InvalidValueError("epsilon must be positive", {"epsilon": epsilon})
    if k < 1:
        raise InvalidValueError("at least one component is required", {"k": k})
    views = [np.asarray(v, dtype=float) for v in views]
    if len(views) < 2:
        raise InvalidValueError("at least two views are required", {"L": len(views)})

    covs = coeff_covariances(views, ddof=ddof)
    m, b = assemble_functional_problem(covs, epsilon)
    sizes = [v.shape[1] for v in views]
    solution = solve_generalized_sym(
        m, b, truncation_tol=truncation_tol, k=min(k, m.shape[0]), block_sizes=sizes, method=eig_method
    )
    weights, diagnostics = normalized_weights(solution, _diagonal_blocks(covs, epsilon), k)

    centered = [v - v.mean(axis=0) for v in views]
    scores = np.stack([np.column_stack([c @ w[:, comp] for c, w in zip(centered, weights)]) for comp in range(k)])
    return solution.eigenvalues[:k].copy(), weights, scores, diagnostics


def solve_coefficient_mcca(
    views: Sequence[np.ndarray],
    epsilon: float,
    k: int,
    ddof: int = 1,
    truncation_tol: float = DEFAULT_TRUNCATION_TOL,
    eig_method: str = "auto",
    unit_labels: Optional[Sequence[str]] = None,
    feature_names: Optional[Sequence[str]] = None,
) -> MccaSolution:
    """Regularized multiple CCA on plain vector views.

    Args:
        views: Per feature, an (n, dim_l) array
        epsilon: Ridge, > 0
        k: Number of components
        ddof: Covariance denominator n - ddof
        truncation_tol: Deflation threshold
        eig_method: Eigen solver selection
        unit_labels: Optional row labels
        feature_names: Optional view names

    Returns:
        MccaSolution with centered scores (c - mean) . w_l
    """
    correlations, weights, scores, diagnostics = _solve_views(views, epsilon, k, ddof, truncation_tol, eig_method)
    n = scores.shape[1]
    return MccaSolution(
        correlations=correlations,
        weights=weights,
        scores=scores,
        epsilon_used=float(epsilon),
        method=Method.FUNCTIONAL,
        diagnostics=diagnostics,
        unit_labels=list(unit_labels) if unit_labels is not None else [str(i + 1) for i in range(n)],
        feature_names=list(feature_names) if feature_names is not None else [str(l + 1) for l in range(len(views))],
        params={"ddof": ddof, "truncation_tol": truncation_tol},
    )


def solve_functional_mcca(
    dataset: RepeatedMeasuresDataset,
    basis: Union[BasisSpec, int],
    epsilon: float,
    k: int,
    truncation_tol: float = DEFAULT_TRUNCATION_TOL,
    eig_method: str = "auto",
    logger: Optional[RunLogger] = None,
) -> MccaSolution:
    """Fit multiple functional CCA and return the leading k components.

    Args:
        dataset: Validated dataset
        basis: BasisSpec on the dataset's grid, or just the odd basis size
        epsilon: Ridge, > 0
        k: Number of components

    Raises:
        UnderdeterminedFitError: If T < B
        InsufficientRankError: If fewer than k components survive deflation
    """
    if not isinstance(basis, BasisSpec):
        basis = BasisSpec(size=basis, n_times=dataset.T)
    if basis.n_times != dataset.T:
        raise DimensionMismatchError("basis grid differs from the dataset's time count", {"T": dataset.T, "grid": basis.n_times})

    coefficients = smooth_dataset(dataset, basis, logger=logger)
    correlations, weights, scores, diagnostics = _solve_views(
        coefficients.coefficients, epsilon, k, 1, truncation_tol, eig_method
    )
    result = MccaSolution(
        correlations=correlations,
        weights=weights,
        scores=scores,
        epsilon_used=float(epsilon),
        method=Method.FUNCTIONAL,
        diagnostics=diagnostics,
        unit_labels=list(dataset.unit_labels),
        feature_names=list(dataset.feature_names),
        group_labels=None if dataset.group_labels is None else list(dataset.group_labels),
        params={
            "basis_size": basis.size,
            "variables": [len(v) for v in dataset.variable_names],
            "truncation_tol": truncation_tol,
        },
    )

    if logger:
        logger.log(
            EventType.SOLVER_DONE,
            {"method": "functional", "correlations": [round(float(r), 6) for r in result.correlations]},
            deflated_rank=diagnostics.deflated_rank,
        )
        for message in diagnostics.warnings:
            logger.warning(message)
    return result


def weight_function(
    weights: np.ndarray,
    basis: Union[BasisSpec, int],
    variable: int,
    t: Union[float, np.ndarray],
) -> Union[float, np.ndarray]:
    """Evaluate the weight function of one variable, sum_b w[variable*B + b] phi_b(t).

    Args:
        weights: A feature's weight vector of length p_l * B (variable-major)
        basis: The smoothing basis or its size
        variable: 0-based variable index
        t: Point(s) in [0, 1]
    """
    size = basis.size if isinstance(basis, BasisSpec) else int(basis)
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or weights.size % size:
        raise DimensionMismatchError("weight length is not a multiple of the basis size", {"length": weights.size, "B": size})
    n_vars = weights.size // size
    if isinstance(variable, bool) or not 0 <= variable < n_vars:
        raise InvalidVariableIndexError(f"variable {variable + 1} out of range", {"variables": n_vars})
    values = fourier_basis(size, t) @ weights[variable * size:(variable + 1) * size]
    return float(values) if np.ndim(values) == 0 else values


def weight_curve_grid(
    solution: MccaSolution,
    basis_size: int,
    points: int = 201,
) -> List[Tuple[int, int, int, float, float]]:
    """Rows (component, feature, variable, t, value) on an even grid, 0-based indices."""
    grid = np.linspace(0.0, 1.0, points)
    rows = []
    for c in range(solution.n_components):
        for l, w in enumerate(solution.component_weights(c)):
            for v in range(w.size // basis_size):
                values = weight_function(w, basis_size, v, grid)
                rows.extend((c, l, v, float(t), float(x)) for t, x in zip(grid, values))
    return rows
