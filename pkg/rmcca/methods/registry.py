"""Method registry for easy access to the MCCA variants."""

from typing import Any, Callable, Dict, List, Optional

from rmcca.core.config import AnalysisConfig
from rmcca.core.exceptions import InvalidValueError
from rmcca.core.types import MccaSolution, RepeatedMeasuresDataset
from rmcca.logging import RunLogger
from rmcca.methods.functional import BasisSpec, solve_functional_mcca
from rmcca.methods.kernel import resolve_kernel_specs, solve_kernel_mcca

Runner = Callable[[RepeatedMeasuresDataset, AnalysisConfig, Optional[RunLogger]], MccaSolution]


class MethodRegistry:
    """Registry of analysis runners.

    A runner takes (dataset, config, logger) and returns an MccaSolution.
    """

    def __init__(self):
        """Initialize the registry."""
        self._methods: Dict[str, Dict[str, Any]] = {}

    def register(self, name: str, runner: Runner, description: str, tags: Optional[List[str]] = None) -> None:
        """Register a runner under ``name``."""
        if not callable(runner):
            raise InvalidValueError(f"runner for '{name}' is not callable")
        self._methods[name] = {"runner": runner, "description": description, "tags": tags or []}

    def get(self, name: str) -> Runner:
        """Get a runner by name.

        Raises:
            InvalidValueError: If the method is not registered
        """
        if name not in self._methods:
            raise InvalidValueError(f"method '{name}' not found", {"available": self.list_names()})
        return self._methods[name]["runner"]

    def list_names(self) -> List[str]:
        """Names of all registered methods."""
        return list(self._methods.keys())


def _prepare(dataset: RepeatedMeasuresDataset, config: AnalysisConfig) -> RepeatedMeasuresDataset:
    return dataset.standardized() if config.standardize else dataset


def run_kernel(
    dataset: RepeatedMeasuresDataset,
    config: AnalysisConfig,
    logger: Optional[RunLogger] = None,
) -> MccaSolution:
    """Multiple kernel CCA with the config's kernel, gamma and epsilon."""
    dataset = _prepare(dataset, config)
    specs = resolve_kernel_specs(dataset, config.kernel, config.kernel_gamma)
    return solve_kernel_mcca(
        dataset,
        specs,
        epsilon=config.resolve_epsilon(dataset.n),
        k=config.n_components,
        truncation_tol=config.truncation_tol,
        eig_method=config.eig_method,
        logger=logger,
    )


def run_functional(
    dataset: RepeatedMeasuresDataset,
    config: AnalysisConfig,
    logger: Optional[RunLogger] = None,
) -> MccaSolution:
    """Multiple functional CCA with the config's basis size and epsilon."""
    dataset = _prepare(dataset, config)
    return solve_functional_mcca(
        dataset,
        BasisSpec(size=config.basis_size, n_times=dataset.T),
        epsilon=config.resolve_epsilon(dataset.n),
        k=config.n_components,
        truncation_tol=config.truncation_tol,
        eig_method=config.eig_method,
        logger=logger,
    )


registry = MethodRegistry()

registry.register(
    "kernel",
    run_kernel,
    description="Multiple kernel CCA on centered Gram matrices of the T x p blocks",
    tags=["gaussian", "linear"],
)

registry.register(
    "functional",
    run_functional,
    description="Multiple functional CCA on Fourier coefficients of the smoothed trajectories",
    tags=["fourier"],
)


def get_method(name: str) -> Runner:
    """Get a runner by name."""
    return registry.get(name)


def list_methods() -> List[str]:
    """Names of all available methods."""
    return registry.list_names()
