"""rmcca - multiple kernel and functional CCA for repeated-measures data."""

__version__ = "0.1.0"

from rmcca.core.types import Method, RepeatedMeasuresDataset, MccaSolution
from rmcca.core.config import AnalysisConfig
from rmcca.core.exceptions import RMCCAError, ValidationError, NumericalError

__all__ = [
    "__version__",
    "Method",
    "RepeatedMeasuresDataset",
    "MccaSolution",
    "AnalysisConfig",
    "RMCCAError",
    "ValidationError",
    "NumericalError",
]
