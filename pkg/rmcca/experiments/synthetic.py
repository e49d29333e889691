"""Latent-factor repeated-measures data with known shared structure."""

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict

import numpy as np

from rmcca.core.exceptions import InvalidValueError
from rmcca.core.types import RepeatedMeasuresDataset

PATTERN_STREAM = 0


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a latent-factor dataset.

    Block A_l[k] = loading_scale * sum_j z_kj Lambda_lj + noise_sd * E, with
    unit factors z_k ~ N(0, I) and fixed T x p patterns Lambda_lj.

    Attributes:
        n: Number of units
        L: Number of features
        T: Time points per block
        p: Variables per feature
        latent_dim: Number of shared latent factors
        loading_scale: Scale of the shared signal
        noise_sd: Standard deviation of the independent noise
        seed: Seed of the pattern stream and base of the unit streams
        replicate: Unit stream index; replicates share the patterns
        n_groups: Group labels from quantiles of the first factor (0 for none)
    """

    n: int = 100
    L: int = 2
    T: int = 1
    p: int = 1
    latent_dim: int = 1
    loading_scale: float = 1.0
    noise_sd: float = 1.0
    seed: int = 0
    replicate: int = 0
    n_groups: int = 0

    def __post_init__(self):
        """Validate the generator settings."""
        if self.n < 3 or self.L < 2 or self.T < 1 or self.p < 1:
            raise InvalidValueError("need n >= 3, L >= 2, T >= 1 and p >= 1", self.to_dict())
        if self.latent_dim < 1:
            raise InvalidValueError("latent_dim must be at least 1", {"latent_dim": self.latent_dim})
        if self.noise_sd < 0 or self.loading_scale < 0:
            raise InvalidValueError("noise_sd and loading_scale must be non-negative", self.to_dict())
        if self.seed < 0 or self.replicate < 0:
            raise InvalidValueError("seed and replicate must be non-negative", self.to_dict())
        if not 0 <= self.n_groups <= self.n:
            raise InvalidValueError("n_groups must lie in [0, n]", {"n_groups": self.n_groups})

    def with_size(self, n: int, replicate: int = 0) -> "SyntheticSpec":
        """Same population, another sample size and unit stream."""
        return replace(self, n=n, replicate=replicate)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return asdict(self)


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


def gen_latent_dataset(spec: SyntheticSpec) -> RepeatedMeasuresDataset:
    """Draw a dataset; deterministic given (seed, replicate)."""
    patterns = _stream(spec.seed, PATTERN_STREAM).standard_normal((spec.L, spec.latent_dim, spec.T, spec.p))
    units = _stream(spec.seed, spec.replicate + 1)
    factors = units.standard_normal((spec.n, spec.latent_dim))
    noise = units.standard_normal((spec.L, spec.n, spec.T, spec.p))

    blocks = [
        spec.loading_scale * np.einsum("kj,jtp->ktp", factors, patterns[l]) + spec.noise_sd * noise[l]
        for l in range(spec.L)
    ]

    width = len(str(spec.n))
    group_labels = None
    if spec.n_groups > 0:
        edges = np.quantile(factors[:, 0], np.linspace(0.0, 1.0, spec.n_groups + 1)[1:-1])
        group_labels = [f"g{int(np.searchsorted(edges, z, side='right')) + 1}" for z in factors[:, 0]]

    return RepeatedMeasuresDataset(
        blocks=blocks,
        unit_labels=[f"u{k + 1:0{width}d}" for k in range(spec.n)],
        feature_names=[f"f{l + 1}" for l in range(spec.L)],
        group_labels=group_labels,
    )
