"""Empirical convergence of the top canonical correlation under the n^(-1/4) schedule."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from rmcca.core.exceptions import InvalidValueError
from rmcca.core.config import KERNELS
from rmcca.core.utils import auto_epsilon
from rmcca.experiments.synthetic import SyntheticSpec, gen_latent_dataset
from rmcca.logging import EventType, RunLogger
from rmcca.methods.functional import BasisSpec, smooth_dataset, solve_coefficient_mcca
from rmcca.methods.kernel import resolve_kernel_specs, solve_kernel_mcca
from rmcca.methods.registry import list_methods

REFERENCE_FACTOR = 20
REFERENCE_REPLICATE = 2 ** 31
DEFAULT_MAX_REFERENCE = 2000

HEADER_NOTE = (
    "reference correlation comes from one run with n_ref = 20 * max(sample_sizes) and eps = n_ref^(-1/4); "
    "errors are scalar |rho_hat - rho_ref|, a weaker probe than operator-norm rates"
)


@dataclass
class ConvergenceReport:
    """Errors of the top correlation against a large-sample reference.

    Attributes:
        sample_sizes: Strictly increasing sample sizes
        epsilons: Regularization used at each size
        errors: Array (sizes, reps) of |rho_hat - rho_ref|
        estimates: Array (sizes, reps) of rho_hat
        medians: Median error per size
        iqrs: Interquartile range of the errors per size
        reference_correlation: rho_ref
        reference_size: Units in the reference run
        reference_capped: Whether the reference size was capped
        method: "kernel" or "functional"
        kernel: Kernel kind for the kernel method
    """

    sample_sizes: List[int]
    epsilons: List[float]
    errors: np.ndarray
    estimates: np.ndarray
    medians: List[float] = field(default_factory=list)
    iqrs: List[float] = field(default_factory=list)
    reference_correlation: float = 0.0
    reference_size: int = 0
    reference_capped: bool = False
    method: str = "kernel"
    kernel: str = "linear"
    spec: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "note": HEADER_NOTE,
            "method": self.method,
            "kernel": self.kernel if self.method == "kernel" else None,
            "reference": {
                "correlation": float(self.reference_correlation),
                "size": int(self.reference_size),
                "capped": bool(self.reference_capped),
            },
            "spec": dict(self.spec),
            "sample_sizes": [int(n) for n in self.sample_sizes],
            "epsilons": [float(e) for e in self.epsilons],
            "median_error": [float(v) for v in self.medians],
            "iqr_error": [float(v) for v in self.iqrs],
        }

    def errors_frame(self) -> pd.DataFrame:
        """Per-replication rows (n, rep, epsilon, estimate, error); rep is 1-based."""
        rows = [
            (n, r + 1, self.epsilons[i], float(self.estimates[i, r]), float(self.errors[i, r]))
            for i, n in enumerate(self.sample_sizes)
            for r in range(self.errors.shape[1])
        ]
        return pd.DataFrame(rows, columns=["n", "rep", "epsilon", "estimate", "error"])


def top_correlation(
    spec: SyntheticSpec,
    method: str,
    kernel: str,
    epsilon: float,
    basis_size: int = 5,
) -> float:
    """Top correlation of one synthetic draw.

    Linear-kernel and functional fits are solved in primal (coefficient) form,
    which for the linear kernel is the same problem as the Gram form.
    """
    dataset = gen_latent_dataset(spec)
    if method == "functional":
        coefficients = smooth_dataset(dataset, BasisSpec(size=basis_size, n_times=dataset.T))
        solution = solve_coefficient_mcca(coefficients.coefficients, epsilon, k=1, ddof=1)
    elif kernel == "linear":
        views = [dataset.flattened(l) for l in range(dataset.L)]
        solution = solve_coefficient_mcca(views, epsilon, k=1, ddof=0)
    else:
        solution = solve_kernel_mcca(dataset, resolve_kernel_specs(dataset, "gaussian", "median"), epsilon, k=1)
    return float(solution.correlations[0])


def convergence_study(
    template: SyntheticSpec,
    sample_sizes: Sequence[int],
    reps: int = 20,
    method: str = "kernel",
    kernel: str = "linear",
    basis_size: int = 5,
    max_reference_size: int = DEFAULT_MAX_REFERENCE,
    logger: Optional[RunLogger] = None,
) -> ConvergenceReport:
    """Median |rho_hat - rho_ref| per sample size with eps_n = n^(-1/4).

    Args:
        template: Population spec; n and replicate are overridden
        sample_sizes: Strictly increasing sizes
        reps: Replications per size (replicate streams 0..reps-1)
        method: "kernel" or "functional"
        kernel: Kernel kind for the kernel method
        basis_size: Basis size for the functional method
        max_reference_size: Cap on the Gaussian-kernel reference size
        logger: Optional run logger
    """
    sizes = [int(n) for n in sample_sizes]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InvalidValueError("sample sizes must be strictly increasing", {"sample_sizes": sizes})
    if reps < 1:
        raise InvalidValueError("at least one replication is required", {"reps": reps})
    if method not in list_methods() or kernel not in KERNELS:
        raise InvalidValueError("unknown method or kernel", {"method": method, "kernel": kernel})

    reference_size = REFERENCE_FACTOR * max(sizes)
    capped = False
    if method == "kernel" and kernel == "gaussian" and reference_size > max_reference_size:
        reference_size, capped = max_reference_size, True
    reference = top_correlation(
        template.with_size(reference_size, REFERENCE_REPLICATE),
        method,
        kernel,
        auto_epsilon(reference_size),
        basis_size,
    )
    if logger:
        logger.info("reference run done", n=reference_size, correlation=round(reference, 6), capped=capped)

    estimates = np.empty((len(sizes), reps))
    for i, n in enumerate(sizes):
        epsilon = auto_epsilon(n)
        for r in range(reps):
            estimates[i, r] = top_correlation(template.with_size(n, r), method, kernel, epsilon, basis_size)
        if logger:
            logger.log(
                EventType.CONVERGENCE_STEP,
                {"n": n, "median_error": round(float(np.median(np.abs(estimates[i] - reference))), 6)},
            )

    errors = np.abs(estimates - reference)
    q25, q75 = np.percentile(errors, [25, 75], axis=1)
    return ConvergenceReport(
        sample_sizes=sizes,
        epsilons=[auto_epsilon(n) for n in sizes],
        errors=errors,
        estimates=estimates,
        medians=np.median(errors, axis=1).tolist(),
        iqrs=(q75 - q25).tolist(),
        reference_correlation=reference,
        reference_size=reference_size,
        reference_capped=capped,
        method=method,
        kernel=kernel,
        spec={k: v for k, v in template.to_dict().items() if k not in ("n", "replicate")},
    )
