"""Regularized multiple kernel CCA in Gram form.

For centered Gram matrices G~_1..G~_L the sample problem is

    max sum_{i != j} w_i^T G~_i G~_j w_j / n
    s.t. sum_l w_l^T (G~_l^2 / n + eps G~_l) w_l = L

i.e. the generalized eigenproblem M w = rho B w with M_ij = G~_i G~_j / n
(i != j) and block-diagonal B_ll = G~_l^2 / n + eps G~_l. B is singular
(G~_l annihilates the constant vector) and is deflated, not jittered.
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from rmcca.core.exceptions import InvalidValueError
from rmcca.core.linalg import DEFAULT_TRUNCATION_TOL, solve_generalized_sym
from rmcca.core.types import MccaSolution, Method, RepeatedMeasuresDataset
from rmcca.logging import EventType, RunLogger
from rmcca.methods.common import assemble_blocks, normalized_weights
from rmcca.methods.kernel.gram import GramSet, gram_set
from rmcca.methods.kernel.kernels import KernelSpec


def _diagonal_blocks(grams: GramSet, epsilon: float):
    n = grams.n
    return [g @ g / n + epsilon * g for g in grams.centered]


def assemble_kernel_problem(grams: GramSet, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
    """Assemble (M, B) of the regularized Gram-form eigenproblem.

    Args:
        grams: Centered Gram matrices
        epsilon: Regularization (non-negative)

    Returns:
        Tuple of symmetric M and symmetric PSD block-diagonal B, both Ln x Ln
    """
    if not epsilon >= 0:
        raise InvalidValueError("epsilon must be non-negative", {"epsilon": epsilon})
    n, n_features = grams.n, grams.L
    g = grams.centered
    cross = [[None] * n_features for _ in range(n_features)]
    for i in range(n_features):
        for j in range(i + 1, n_features):
            cross[i][j] = g[i] @ g[j] / n
    return assemble_blocks(cross, _diagonal_blocks(grams, epsilon))


def solve_kernel_mcca(
    dataset: RepeatedMeasuresDataset,
    specs: Sequence[KernelSpec],
    epsilon: float,
    k: int,
    truncation_tol: float = DEFAULT_TRUNCATION_TOL,
    eig_method: str = "auto",
    logger: Optional[RunLogger] = None,
) -> MccaSolution:
    """Fit multiple kernel CCA and return the leading k components.

    Args:
        dataset: Validated dataset
        specs: One kernel per feature
        epsilon: Regularization, > 0
        k: Number of components
        truncation_tol: Deflation threshold relative to the largest eigenvalue of B
        eig_method: Eigen solver selection
        logger: Optional run logger

    Returns:
        MccaSolution with scores U^(l)(unit j) = (G~_l w_l)_j

    Raises:
        InsufficientRankError: If the deflated rank is below k
    """
    if not epsilon > 0:
        raise InvalidValueError("epsilon must be positive", {"epsilon": epsilon})
    if k < 1:
        raise InvalidValueError("at least one component is required", {"k": k})

    grams = gram_set(dataset, specs, logger=logger)
    m, b = assemble_kernel_problem(grams, epsilon)
    n, n_features = dataset.n, dataset.L
    k_eff = min(k, m.shape[0])
    solution = solve_generalized_sym(
        m, b, truncation_tol=truncation_tol, k=k_eff, block_sizes=[n] * n_features, method=eig_method
    )
    weights, diagnostics = normalized_weights(solution, _diagonal_blocks(grams, epsilon), k)

    for l, rank in enumerate(diagnostics.block_ranks):
        if rank < n - 1:
            diagnostics.warnings.append(
                f"centered Gram of feature '{dataset.feature_names[l]}' has rank {rank} < n-1 = {n - 1}"
            )

    scores = np.stack(
        [np.column_stack([grams.centered[l] @ weights[l][:, c] for l in range(n_features)]) for c in range(k)]
    )
    result = MccaSolution(
        correlations=solution.eigenvalues[:k].copy(),
        weights=weights,
        scores=scores,
        epsilon_used=float(epsilon),
        method=Method.KERNEL,
        diagnostics=diagnostics,
        unit_labels=list(dataset.unit_labels),
        feature_names=list(dataset.feature_names),
        group_labels=None if dataset.group_labels is None else list(dataset.group_labels),
        params={"kernels": [s.to_dict() for s in specs], "truncation_tol": truncation_tol},
    )

    if logger:
        logger.log(
            EventType.SOLVER_DONE,
            {"method": "kernel", "correlations": [round(float(r), 6) for r in result.correlations]},
            deflated_rank=diagnostics.deflated_rank,
        )
        for message in diagnostics.warnings:
            logger.warning(message)
    return result


def kernel_scores(solution: MccaSolution, grams: GramSet, component: int) -> np.ndarray:
    """n x L canonical scores of one component: column l is G~_l w_l."""
    weights = solution.component_weights(component)
    return np.column_stack([g @ w for g, w in zip(grams.centered, weights)])
