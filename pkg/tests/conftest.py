"""Shared fixtures for the rmcca test suite."""

import numpy as np
import pytest

from rmcca.core.types import RepeatedMeasuresDataset
from rmcca.experiments.synthetic import SyntheticSpec, gen_latent_dataset
from rmcca.logging import RunLogger


def long_csv(rows, group=False):
    """Render (unit, feature, time, variable, value[, group]) tuples as dataset CSV."""
    header = "unit,feature,time,variable,value" + (",group" if group else "")
    return "\n".join([header] + [",".join(str(v) for v in row) for row in rows]) + "\n"


def full_rows(n_units=3, features=("a", "b"), times=(1,), variables=(1,), seed=0):
    """Complete long-format rows with random values."""
    rng = np.random.default_rng(seed)
    return [
        (f"u{k}", f, t, v, repr(float(rng.normal())))
        for f in features
        for k in range(1, n_units + 1)
        for t in times
        for v in variables
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def latent_dataset():
    return gen_latent_dataset(SyntheticSpec(n=40, L=3, T=4, p=2, latent_dim=2, noise_sd=0.5, seed=7, n_groups=2))


@pytest.fixture
def curve_dataset():
    return gen_latent_dataset(SyntheticSpec(n=30, L=2, T=12, p=2, latent_dim=2, noise_sd=0.3, seed=3))


@pytest.fixture
def quiet_logger():
    return RunLogger(run_id="test", echo=False)


def make_dataset(blocks, groups=None):
    """Dataset with default labels from a list of (n, T, p) arrays."""
    n = np.asarray(blocks[0]).shape[0]
    return RepeatedMeasuresDataset(
        blocks=[np.asarray(b, dtype=float) for b in blocks],
        unit_labels=[f"u{k + 1}" for k in range(n)],
        feature_names=[f"f{l + 1}" for l in range(len(blocks))],
        group_labels=groups,
    )
