"""Clusterability evaluation of canonical scores."""

from rmcca.evaluation.special import regularized_incomplete_beta
from rmcca.evaluation.hopkins import (
    HopkinsResult,
    SamplingRegion,
    hopkins,
    hopkins_curve,
    hopkins_once,
    hopkins_pvalue,
    interpret_hopkins,
    replication_rng,
)

__all__ = [
    "regularized_incomplete_beta",
    "HopkinsResult",
    "SamplingRegion",
    "hopkins",
    "hopkins_curve",
    "hopkins_once",
    "hopkins_pvalue",
    "interpret_hopkins",
    "replication_rng",
]
