"""Dense symmetric linear algebra shared by the kernel and functional solvers.

Small matrices are diagonalized with cyclic Jacobi rotations, larger ones with
LAPACK through ``scipy.linalg.eigh``. Both paths return eigenvalues in
descending order with the same sign convention: every eigenvector is scaled so
that its largest-magnitude entry is positive (first such entry on ties).
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from rmcca.core.exceptions import (
    AllTruncatedError,
    ConvergenceError,
    DimensionMismatchError,
    InvalidValueError,
    NonFiniteError,
    NotSymmetricError,
)
from rmcca.core.utils import relative_gap_flags

SYMMETRY_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
JACOBI_MAX_DIM = 32
DEFAULT_TRUNCATION_TOL = 1e-10
DEGENERACY_TOL = 1e-8

EIG_METHODS = ("auto", "jacobi", "lapack")


@dataclass
class SymEigen:
    """Eigen-decomposition of a real symmetric matrix.

    Attributes:
        eigenvalues: Eigenvalues, non-increasing
        eigenvectors: Orthonormal eigenvectors as columns, same order
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Return V diag(lambda) V^T."""
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


@dataclass
class GeneralizedEigenSolution:
    """Leading pairs of M w = lambda B w restricted to the range of B.

    Attributes:
        eigenvalues: Leading eigenvalues, non-increasing
        right_vectors: Matching vectors w_i as columns
        deflated_rank: Dimension kept after truncating the null space of B
        block_ranks: Retained rank of each diagonal block of B
        degenerate: Flag i is set when eigenvalue i is within 1e-8*|lambda_1|
            of eigenvalue i+1, i.e. the eigenvector is not unique
        spectrum: Full spectrum of the reduced problem
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    deflated_rank: int
    block_ranks: List[int] = field(default_factory=list)
    degenerate: List[bool] = field(default_factory=list)
    spectrum: Optional[np.ndarray] = None


def _as_square(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be a square matrix", {"shape": a.shape})
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return a


def _symmetrized(a: np.ndarray, name: str) -> np.ndarray:
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    scale = np.max(np.abs(a)) if a.size else 0.0
    if asym > SYMMETRY_TOL * max(scale, np.finfo(float).tiny):
        raise NotSymmetricError(
            f"{name} is not symmetric",
            {"max_asymmetry": float(asym), "max_abs_entry": float(scale)},
        )
    return 0.5 * (a + a.T)


def orient_columns(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each is positive."""
    vectors = np.array(vectors, dtype=float, copy=True)
    if vectors.size == 0:
        return vectors
    magnitude = np.abs(vectors)
    peak = magnitude.max(axis=0)
    for j in range(vectors.shape[1]):
        if peak[j] == 0.0:
            continue
        i = int(np.argmax(magnitude[:, j] >= peak[j] * (1.0 - 1e-9)))
        if vectors[i, j] < 0.0:
            vectors[:, j] = -vectors[:, j]
    return vectors


def _jacobi_eigh(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization (row-by-row sweeps)."""
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < JACOBI_TOL * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    sign = 1.0 if tau >= 0.0 else -1.0
                    t = sign / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.T @ a[[p, q], :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                v[:, [p, q]] = v[:, [p, q]] @ rot

    raise ConvergenceError(
        "Jacobi iteration did not converge",
        {"dimension": n, "sweeps": JACOBI_MAX_SWEEPS},
    )


def sym_eig(a: np.ndarray, method: str = "auto") -> SymEigen:
    """Full eigen-decomposition of a symmetric matrix.

    Args:
        a: Symmetric n x n matrix (relative asymmetry at most 1e-12)
        method: "jacobi", "lapack", or "auto" (Jacobi up to 32 x 32)

    Returns:
        SymEigen with descending eigenvalues; ties keep the solver's index order

    Raises:
        NonFiniteError: If the matrix contains NaN or Inf
        NotSymmetricError: If the asymmetry exceeds tolerance
    """
    if method not in EIG_METHODS:
        raise InvalidValueError(f"unknown eigen method '{method}'", {"choices": EIG_METHODS})
    a = _symmetrized(_as_square(a, "matrix"), "matrix")
    n = a.shape[0]
    if n == 0:
        return SymEigen(np.zeros(0), np.zeros((0, 0)))

    if method == "jacobi" or (method == "auto" and n <= JACOBI_MAX_DIM):
        values, vectors = _jacobi_eigh(a)
    else:
        values, vectors = sla.eigh(a)

    order = np.argsort(-values, kind="stable")
    return SymEigen(values[order], orient_columns(vectors[:, order]))


def _whitening_factors(
    b: np.ndarray,
    truncation_tol: float,
    block_sizes: Optional[Sequence[int]] = None,
    method: str = "auto",
) -> Tuple[np.ndarray, np.ndarray, List[int]]:
    """Retained eigenvectors and eigenvalues of a PSD (block-diagonal) matrix.

    Eigenvalues are kept when they exceed ``truncation_tol`` times the largest
    eigenvalue of the whole matrix. Returns (V_r, lambda_r, block_ranks) with
    V_r embedded in the full dimension.
    """
    n = b.shape[0]
    sizes = [n] if block_sizes is None else [int(s) for s in block_sizes]
    if sum(sizes) != n or any(s < 1 for s in sizes):
        raise DimensionMismatchError(
            "block sizes do not partition the matrix", {"dimension": n, "block_sizes": sizes}
        )

    decompositions = []
    start = 0
    for size in sizes:
        block = b[start:start + size, start:start + size]
        decompositions.append((start, sym_eig(block, method=method)))
        start += size

    lam_max = max(float(eig.eigenvalues[0]) for _, eig in decompositions)
    if not lam_max > 0.0:
        raise AllTruncatedError("right-hand matrix has no positive eigenvalue", {"max_eigenvalue": lam_max})
    threshold = truncation_tol * lam_max

    columns = []
    values = []
    block_ranks = []
    for (offset, eig), size in zip(decompositions, sizes):
        keep = eig.eigenvalues > threshold
        block_ranks.append(int(keep.sum()))
        for j in np.flatnonzero(keep):
            col = np.zeros(n)
            col[offset:offset + size] = eig.eigenvectors[:, j]
            columns.append(col)
            values.append(eig.eigenvalues[j])

    if not columns:
        raise AllTruncatedError("every eigenvalue was truncated", {"threshold": threshold})
    return np.column_stack(columns), np.asarray(values), block_ranks


def inv_sqrt_psd(
    a: np.ndarray,
    truncation_tol: float = DEFAULT_TRUNCATION_TOL,
    method: str = "auto",
) -> Tuple[np.ndarray, int]:
    """Truncated inverse square root of a symmetric PSD matrix.

    Args:
        a: Symmetric PSD matrix (small negative eigenvalues are truncated)
        truncation_tol: Keep eigenvalues above ``truncation_tol * lambda_max``
        method: Eigen solver selection, see ``sym_eig``

    Returns:
        Tuple of (V_r diag(lambda_r^-1/2) V_r^T, retained rank)

    Raises:
        AllTruncatedError: If no eigenvalue exceeds the threshold
    """
    a = _symmetrized(_as_square(a, "matrix"), "matrix")
    vectors, values, _ = _whitening_factors(a, truncation_tol, method=method)
    root = (vectors / np.sqrt(values)) @ vectors.T
    return root, int(values.size)


def solve_generalized_sym(
    m: np.ndarray,
    b: np.ndarray,
    truncation_tol: float = DEFAULT_TRUNCATION_TOL,
    k: Optional[int] = None,
    block_sizes: Optional[Sequence[int]] = None,
    method: str = "auto",
) -> GeneralizedEigenSolution:
    """Leading solutions of M w = lambda B w with B symmetric PSD.

    B is whitened by its truncated inverse square root, the symmetric problem
    is solved on the retained range of B and eigenvectors are mapped back by
    w = S f. When ``block_sizes`` is given, B is taken as block diagonal and
    each block is whitened separately.

    Args:
        m: Symmetric left-hand matrix
        b: Symmetric PSD right-hand matrix
        truncation_tol: Deflation threshold relative to the largest eigenvalue of B
        k: Number of leading pairs to return (default: all retained)
        block_sizes: Sizes of the diagonal blocks of B
        method: Eigen solver selection, see ``sym_eig``

    Returns:
        GeneralizedEigenSolution with at most ``min(k, deflated_rank)`` pairs

    Raises:
        DimensionMismatchError: If M and B differ in shape or k is too large
        NonFiniteError, NotSymmetricError, AllTruncatedError: Propagated
    """
    m = _symmetrized(_as_square(m, "left-hand matrix"), "left-hand matrix")
    b = _symmetrized(_as_square(b, "right-hand matrix"), "right-hand matrix")
    if m.shape != b.shape:
        raise DimensionMismatchError("left- and right-hand matrices differ in shape", {"m": m.shape, "b": b.shape})
    n = m.shape[0]
    if k is None:
        k = n
    if k < 1 or k > n:
        raise DimensionMismatchError("requested pair count out of range", {"k": k, "dimension": n})

    vectors, values, block_ranks = _whitening_factors(b, truncation_tol, block_sizes, method)
    whitener = vectors / np.sqrt(values)
    reduced = whitener.T @ m @ whitener
    eig = sym_eig(0.5 * (reduced + reduced.T), method=method)

    count = min(k, eig.eigenvalues.size)
    right = orient_columns(whitener @ eig.eigenvectors[:, :count])
    flags = relative_gap_flags(eig.eigenvalues, DEGENERACY_TOL)[:count]
    flags += [False] * (count - len(flags))

    return GeneralizedEigenSolution(
        eigenvalues=eig.eigenvalues[:count].copy(),
        right_vectors=right,
        deflated_rank=int(values.size),
        block_ranks=block_ranks,
        degenerate=flags,
        spectrum=eig.eigenvalues,
    )
