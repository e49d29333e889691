"""Orthonormal Fourier basis on [0, 1] and its evaluation grid."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from rmcca.core.exceptions import EvenBasisSizeError, InvalidValueError, OutOfIntervalError

QUADRATURE_POINTS = 2048


def _check_size(size: int) -> int:
    if isinstance(size, bool) or int(size) != size or size < 1 or size % 2 == 0:
        raise EvenBasisSizeError("Fourier basis size must be a positive odd integer", {"size": size})
    return int(size)


def fourier_basis(size: int, t: Union[float, np.ndarray]) -> np.ndarray:
    """Evaluate phi_1..phi_B at t.

    phi_1 = 1, phi_2m = sqrt(2) sin(2 pi m t), phi_2m+1 = sqrt(2) cos(2 pi m t).

    Args:
        size: Odd basis size B
        t: Point or array of points in [0, 1]

    Returns:
        Array (B,) for scalar t, otherwise (len(t), B)
    """
    size = _check_size(size)
    points = np.asarray(t, dtype=float)
    if not np.all((points >= 0.0) & (points <= 1.0)):
        raise OutOfIntervalError("evaluation point outside [0, 1]", {"t": points.tolist()})

    flat = np.atleast_1d(points)
    values = np.empty((flat.size, size))
    values[:, 0] = 1.0
    for m in range(1, (size - 1) // 2 + 1):
        angle = 2.0 * np.pi * m * flat
        values[:, 2 * m - 1] = np.sqrt(2.0) * np.sin(angle)
        values[:, 2 * m] = np.sqrt(2.0) * np.cos(angle)
    return values[0] if points.ndim == 0 else values


def midpoint_grid(points: int = QUADRATURE_POINTS) -> np.ndarray:
    """Midpoints of ``points`` equal cells of [0, 1]."""
    return (np.arange(points) + 0.5) / points


@dataclass(frozen=True)
class BasisSpec:
    """Fourier basis of odd size B evaluated on a T-point grid over [0, 1].

    Grid points are t_j = (j - 1)/(T - 1) for T > 1 and 0.5 for T = 1.
    """

    size: int
    n_times: int

    def __post_init__(self):
        """Validate basis size and grid length."""
        _check_size(self.size)
        if isinstance(self.n_times, bool) or int(self.n_times) != self.n_times or self.n_times < 1:
            raise InvalidValueError("the grid needs at least one time point", {"T": self.n_times})

    @property
    def interval(self):
        """The fixed domain."""
        return (0.0, 1.0)

    @property
    def grid(self) -> np.ndarray:
        """Evaluation points of the T observations."""
        if self.n_times == 1:
            return np.array([0.5])
        return np.linspace(0.0, 1.0, self.n_times)

    def design(self) -> np.ndarray:
        """T x B matrix of basis values on the grid."""
        return fourier_basis(self.size, self.grid)

    def quadrature_gram(self, points: int = QUADRATURE_POINTS) -> np.ndarray:
        """Midpoint-rule Gram matrix of the basis (identity when orthonormal)."""
        values = fourier_basis(self.size, midpoint_grid(points))
        return values.T @ values / points
