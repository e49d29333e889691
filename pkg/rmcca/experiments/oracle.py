"""Classical two-set canonical correlation, an independent check of the solvers."""

import numpy as np

from rmcca.core.exceptions import InsufficientUnitsError, SingularCovarianceError
from rmcca.core.linalg import inv_sqrt_psd, sym_eig

SINGULAR_TOL = 1e-12


def _inv_sqrt_cov(cov: np.ndarray, name: str) -> np.ndarray:
    root, rank = inv_sqrt_psd(cov, truncation_tol=SINGULAR_TOL)
    if rank < cov.shape[0]:
        raise SingularCovarianceError(f"sample covariance of {name} is singular", {"rank": rank, "dimension": cov.shape[0]})
    return root


def classical_cca_oracle(x: np.ndarray, y: np.ndarray) -> float:
    """Top canonical correlation of X (n x p) and Y (n x q).

    Square root of the top eigenvalue of S_xx^-1/2 S_xy S_yy^-1 S_yx S_xx^-1/2.

    Raises:
        InsufficientUnitsError: If n <= p + q
        SingularCovarianceError: If S_xx or S_yy is singular
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x = x[:, None] if x.ndim == 1 else x
    y = y[:, None] if y.ndim == 1 else y
    n = x.shape[0]
    if y.shape[0] != n or n <= x.shape[1] + y.shape[1]:
        raise InsufficientUnitsError("classical CCA needs n > p + q matched rows", {"n": n, "p": x.shape[1], "q": y.shape[1]})

    xc = x - x.mean(axis=0)
    yc = y - y.mean(axis=0)
    sxx = xc.T @ xc / (n - 1)
    syy = yc.T @ yc / (n - 1)
    sxy = xc.T @ yc / (n - 1)

    wx = _inv_sqrt_cov(sxx, "X")
    wy = _inv_sqrt_cov(syy, "Y")
    core = wx @ sxy @ wy
    top = sym_eig(core @ core.T).eigenvalues[0]
    return float(min(1.0, np.sqrt(max(top, 0.0))))
