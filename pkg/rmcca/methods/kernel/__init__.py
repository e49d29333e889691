"""Multiple kernel CCA for repeated-measures blocks."""

from rmcca.methods.kernel.kernels import (
    KernelSpec,
    gaussian_kernel,
    linear_kernel,
    median_gamma,
    resolve_kernel_specs,
)
from rmcca.methods.kernel.gram import GramSet, gram_set, center_gram, centering_matrix
from rmcca.methods.kernel.solver import assemble_kernel_problem, solve_kernel_mcca, kernel_scores

__all__ = [
    "KernelSpec",
    "gaussian_kernel",
    "linear_kernel",
    "median_gamma",
    "resolve_kernel_specs",
    "GramSet",
    "gram_set",
    "center_gram",
    "centering_matrix",
    "assemble_kernel_problem",
    "solve_kernel_mcca",
    "kernel_scores",
]
