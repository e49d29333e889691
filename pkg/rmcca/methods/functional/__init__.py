"""Multiple functional CCA on Fourier-smoothed trajectories."""

from rmcca.methods.functional.basis import BasisSpec, fourier_basis
from rmcca.methods.functional.smoothing import (
    CoeffCovariances,
    CoefficientSet,
    coeff_covariances,
    smooth_block,
    smooth_dataset,
)
from rmcca.methods.functional.solver import (
    assemble_functional_problem,
    solve_coefficient_mcca,
    solve_functional_mcca,
    weight_curve_grid,
    weight_function,
)

__all__ = [
    "BasisSpec",
    "fourier_basis",
    "CoeffCovariances",
    "CoefficientSet",
    "coeff_covariances",
    "smooth_block",
    "smooth_dataset",
    "assemble_functional_problem",
    "solve_coefficient_mcca",
    "solve_functional_mcca",
    "weight_curve_grid",
    "weight_function",
]
