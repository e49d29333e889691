"""Core types, configuration and linear algebra for rmcca."""

from rmcca.core.types import Method, RepeatedMeasuresDataset, MccaSolution, SolverDiagnostics, canonical_points
from rmcca.core.config import AnalysisConfig, parse_config, load_config
from rmcca.core.linalg import SymEigen, GeneralizedEigenSolution, sym_eig, inv_sqrt_psd, solve_generalized_sym
from rmcca.core.exceptions import RMCCAError, ValidationError, NumericalError
from rmcca.core.utils import auto_epsilon

__all__ = [
    "Method",
    "RepeatedMeasuresDataset",
    "MccaSolution",
    "SolverDiagnostics",
    "canonical_points",
    "AnalysisConfig",
    "parse_config",
    "load_config",
    "SymEigen",
    "GeneralizedEigenSolution",
    "sym_eig",
    "inv_sqrt_psd",
    "solve_generalized_sym",
    "RMCCAError",
    "ValidationError",
    "NumericalError",
    "auto_epsilon",
]
