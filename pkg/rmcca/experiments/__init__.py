"""Synthetic data, oracles and convergence experiments."""

from rmcca.experiments.synthetic import SyntheticSpec, gen_latent_dataset
from rmcca.experiments.oracle import classical_cca_oracle
from rmcca.experiments.convergence import ConvergenceReport, convergence_study, top_correlation

__all__ = [
    "SyntheticSpec",
    "gen_latent_dataset",
    "classical_cca_oracle",
    "ConvergenceReport",
    "convergence_study",
    "top_correlation",
]
