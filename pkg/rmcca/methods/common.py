"""Block bookkeeping shared by the kernel and functional solvers."""

from typing import List, Sequence, Tuple

import numpy as np

from rmcca.core.exceptions import InsufficientRankError, NonFiniteError
from rmcca.core.linalg import GeneralizedEigenSolution
from rmcca.core.types import SolverDiagnostics


def block_offsets(sizes: Sequence[int]) -> List[int]:
    """Start offset of each block."""
    return [int(v) for v in np.concatenate([[0], np.cumsum(sizes)[:-1]])]


def assemble_blocks(
    cross: Sequence[Sequence[np.ndarray]],
    diagonal: Sequence[np.ndarray],
) -> Tuple[np.ndarray, np.ndarray]:
    """Assemble M (zero diagonal blocks) and block-diagonal B.

    Only ``cross[i][j]`` with i < j is read; block (j, i) is its transpose.
    """
    sizes = [d.shape[0] for d in diagonal]
    offsets = block_offsets(sizes)
    total = int(sum(sizes))
    m = np.zeros((total, total))
    b = np.zeros((total, total))
    for i, (oi, si) in enumerate(zip(offsets, sizes)):
        b[oi:oi + si, oi:oi + si] = 0.5 * (diagonal[i] + diagonal[i].T)
        for j in range(i + 1, len(sizes)):
            oj, sj = offsets[j], sizes[j]
            m[oi:oi + si, oj:oj + sj] = cross[i][j]
            m[oj:oj + sj, oi:oi + si] = cross[i][j].T
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(b))):
        raise NonFiniteError("assembled eigenproblem contains NaN or Inf")
    return m, b


def normalized_weights(
    solution: GeneralizedEigenSolution,
    diagonal: Sequence[np.ndarray],
    k: int,
) -> Tuple[List[np.ndarray], SolverDiagnostics]:
    """Split eigenvectors per feature and rescale to sum_l w_l^T B_l w_l = L.

    Returns:
        Tuple of (per-feature weight arrays (dim_l, k), diagnostics)

    Raises:
        InsufficientRankError: If fewer than k components survived deflation
    """
    if solution.deflated_rank < k or solution.eigenvalues.size < k:
        raise InsufficientRankError(
            f"only {solution.deflated_rank} components survive deflation, {k} requested",
            {"deflated_rank": solution.deflated_rank, "requested": k},
        )
    sizes = [d.shape[0] for d in diagonal]
    offsets = block_offsets(sizes)
    n_features = len(sizes)

    weights = [np.zeros((size, k)) for size in sizes]
    residuals = []
    for c in range(k):
        w = solution.right_vectors[:, c]
        parts = [w[o:o + s] for o, s in zip(offsets, sizes)]
        quad = sum(float(p @ d @ p) for p, d in zip(parts, diagonal))
        scale = np.sqrt(n_features / quad)
        parts = [scale * p for p in parts]
        for l, p in enumerate(parts):
            weights[l][:, c] = p
        constraint = sum(float(p @ d @ p) for p, d in zip(parts, diagonal))
        residuals.append(abs(constraint - n_features))

    diagnostics = SolverDiagnostics(
        deflated_rank=solution.deflated_rank,
        block_ranks=list(solution.block_ranks),
        degenerate=list(solution.degenerate[:k]),
        constraint_residuals=residuals,
    )
    if any(diagnostics.degenerate):
        tied = [i + 1 for i, flag in enumerate(diagnostics.degenerate) if flag]
        diagnostics.warnings.append(f"degenerate spectrum at components {tied}: weights are not unique")
    return weights, diagnostics
