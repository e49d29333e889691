"""Hopkins statistic for clustering tendency of canonical score point sets.

H = sum u_i^d / sum (u_i^d + w_i^d), where w_i is the distance from a sampled
data point to its nearest other data point and u_i the distance from a
uniform probe to its nearest data point. Under spatial randomness H follows
Beta(m, m); values above 0.75 indicate a clustering tendency.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np
from scipy.spatial import Delaunay, QhullError
from scipy.spatial.distance import cdist

from rmcca.core.exceptions import (
    DegenerateRegionError,
    InsufficientUnitsError,
    InvalidValueError,
    NonFiniteError,
    OutOfRangeError,
    TooManyProbesError,
)
from rmcca.core.types import canonical_points
from rmcca.core.utils import ceil_tenth
from rmcca.evaluation.special import regularized_incomplete_beta
from rmcca.logging import EventType, RunLogger

REGIONS = ("box", "hull", "torus")
CLUSTERING_THRESHOLD = 0.75
MAX_HULL_DIM = 3
HULL_MAX_BATCHES = 1000


@dataclass
class HopkinsResult:
    """Averaged Hopkins statistic with its Beta(m, m) test.

    Attributes:
        H: Mean of H_values
        m: Probe count per replication
        d: Distance exponent (ambient dimension, or 1 for the classical variant)
        reps: Replication count
        H_values: Per-replication statistics, ordered by replication index
        p_value: Two-sided p-value of H under Beta(m, m)
        region: Uniform sampling region, "box" or "hull"
        seed: Seed of the counter-based streams (stream r is keyed by (seed, r))
        dimension: Ambient dimension of the point set
    """

    H: float
    m: int
    d: int
    reps: int
    H_values: List[float] = field(default_factory=list)
    p_value: float = 1.0
    region: str = "box"
    seed: int = 0
    dimension: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "H": float(self.H),
            "m": int(self.m),
            "d": int(self.d),
            "reps": int(self.reps),
            "p_value": float(self.p_value),
            "region": self.region,
            "seed": int(self.seed),
            "dimension": int(self.dimension),
            "rng": "philox(key=(seed, replication))",
            "interpretation": interpret_hopkins(self),
            "H_values": [float(v) for v in self.H_values],
        }


def _as_points(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.ndim != 2 or points.shape[1] < 1:
        raise InvalidValueError("points must form an n x d matrix", {"shape": points.shape})
    if not np.all(np.isfinite(points)):
        raise NonFiniteError("point set contains NaN or Inf")
    if points.shape[0] < 2:
        raise InsufficientUnitsError("the Hopkins statistic needs at least two points", {"n": points.shape[0]})
    return points


class SamplingRegion:
    """Region from which uniform probes are drawn.

    ``box`` and ``hull`` use Euclidean distances. ``torus`` samples the
    bounding box and wraps distances periodically on it (edge-corrected).
    """

    def __init__(self, points: np.ndarray, kind: str = "box"):
        """Build the region spanned by ``points``.

        Raises:
            DegenerateRegionError: If the region has zero volume
        """
        if kind not in REGIONS:
            raise InvalidValueError(f"region must be one of {', '.join(REGIONS)}", {"region": kind})
        self.kind = kind
        self.low = points.min(axis=0)
        self.high = points.max(axis=0)
        self.span = self.high - self.low
        if np.any(self.span <= 0.0):
            flat = [int(j) + 1 for j in np.flatnonzero(self.span <= 0.0)]
            raise DegenerateRegionError("sampling region has zero width", {"coordinates": flat})

        self._hull = None
        dim = points.shape[1]
        if kind == "hull" and dim > 1:
            if dim > MAX_HULL_DIM:
                raise InvalidValueError("hull sampling supports at most three dimensions", {"d": dim})
            try:
                self._hull = Delaunay(points)
            except QhullError as e:
                raise DegenerateRegionError("convex hull has zero volume", {"error": str(e).splitlines()[0]})

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw ``count`` uniform points from the region."""
        dim = self.span.size
        if self._hull is None:
            return self.low + self.span * rng.random((count, dim))

        accepted = []
        total = 0
        for _ in range(HULL_MAX_BATCHES):
            batch = self.low + self.span * rng.random((2 * count, dim))
            inside = batch[self._hull.find_simplex(batch) >= 0]
            accepted.append(inside)
            total += inside.shape[0]
            if total >= count:
                return np.concatenate(accepted)[:count]
        raise DegenerateRegionError("rejection sampling from the hull accepted too few points", {"accepted": total})

    def distances(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Pairwise distances between rows of ``a`` and ``b`` in the region's metric."""
        if self.kind != "torus":
            return cdist(a, b)
        gap = np.abs(a[:, None, :] - b[None, :, :])
        gap = np.minimum(gap, self.span - gap)
        return np.sqrt(np.sum(gap ** 2, axis=2))


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """Counter-based stream for one replication: Philox keyed by (seed, replication)."""
    if seed < 0 or replication < 0:
        raise InvalidValueError("seed and replication index must be non-negative", {"seed": seed})
    return np.random.Generator(np.random.Philox(key=np.array([seed, replication], dtype=np.uint64)))


def hopkins_once(
    points: np.ndarray,
    m: int,
    rng: np.random.Generator,
    exponent: Optional[int] = None,
    region: Union[str, "SamplingRegion"] = "box",
) -> float:
    """One Hopkins statistic.

    Args:
        points: n x d point set
        m: Probe count, 1 <= m < n
        rng: Random generator
        exponent: Distance exponent (default: the dimension d)
        region: "box" (bounding box), "hull" (convex hull, d <= 3) or
            "torus" (bounding box with periodic distances)

    Raises:
        TooManyProbesError: If m >= n
        DegenerateRegionError: If the region has zero volume
    """
    points = _as_points(points)
    n, dim = points.shape
    if m >= n:
        raise TooManyProbesError(f"probe count m = {m} must be below n = {n}", {"m": m, "n": n})
    if m < 1:
        raise InvalidValueError("probe count must be positive", {"m": m})
    power = dim if exponent is None else exponent
    sampler = region if isinstance(region, SamplingRegion) else SamplingRegion(points, region)

    probes = rng.choice(n, size=m, replace=False)
    to_data = sampler.distances(points[probes], points)
    to_data[np.arange(m), probes] = np.inf
    w = to_data.min(axis=1)

    uniform = sampler.sample(rng, m)
    u = sampler.distances(uniform, points).min(axis=1)

    u_sum = float(np.sum(u ** power))
    w_sum = float(np.sum(w ** power))
    if u_sum + w_sum == 0.0:
        return 0.5
    return u_sum / (u_sum + w_sum)


def hopkins(
    points: np.ndarray,
    m: Optional[int] = None,
    reps: int = 100,
    seed: int = 0,
    region: str = "box",
    classical: bool = False,
    logger: Optional[RunLogger] = None,
) -> HopkinsResult:
    """Average of ``reps`` Hopkins statistics with deterministic streams.

    Args:
        points: n x d point set
        m: Probe count (default ceil(n / 10))
        reps: Number of replications
        seed: Stream seed; replication r uses Philox key (seed, r)
        region: Sampling region
        classical: Use exponent 1 instead of d
        logger: Optional run logger
    """
    points = _as_points(points)
    n, dim = points.shape
    m = ceil_tenth(n) if m is None else int(m)
    if reps < 1:
        raise InvalidValueError("at least one replication is required", {"reps": reps})
    exponent = 1 if classical else dim
    sampler = SamplingRegion(points, region)
    if m >= n:
        raise TooManyProbesError(f"probe count m = {m} must be below n = {n}", {"m": m, "n": n})

    values = [hopkins_once(points, m, replication_rng(seed, r), exponent, sampler) for r in range(reps)]
    statistic = float(np.mean(values))
    result = HopkinsResult(
        H=statistic,
        m=m,
        d=exponent,
        reps=reps,
        H_values=values,
        p_value=hopkins_pvalue(statistic, m),
        region=region,
        seed=seed,
        dimension=dim,
    )
    if logger:
        logger.log(EventType.HOPKINS_DONE, {"H": round(statistic, 6), "m": m, "d": exponent, "reps": reps})
    return result


def hopkins_pvalue(statistic: float, m: int) -> float:
    """Two-sided p-value 2 min(F(H), 1 - F(H)) under Beta(m, m).

    Raises:
        OutOfRangeError: If H is outside [0, 1] or m < 1
    """
    if not 0.0 <= statistic <= 1.0:
        raise OutOfRangeError("Hopkins statistic must lie in [0, 1]", {"H": statistic})
    if m < 1:
        raise OutOfRangeError("probe count must be at least 1", {"m": m})
    cdf = regularized_incomplete_beta(statistic, m, m)
    return min(1.0, 2.0 * min(cdf, 1.0 - cdf))


def hopkins_curve(
    scores: np.ndarray,
    max_components: int,
    m: Optional[int] = None,
    reps: int = 100,
    seed: int = 0,
    feature: Optional[int] = None,
    region: str = "box",
    classical: bool = False,
) -> List[HopkinsResult]:
    """Hopkins statistic on the first k components for k = 1..max_components.

    Args:
        scores: Array (K, n, L) of canonical scores
        max_components: Largest k, at most K
        feature: Score feature per coordinate (default: mean over features)
    """
    scores = np.asarray(scores, dtype=float)
    if not 1 <= max_components <= scores.shape[0]:
        raise InvalidValueError("max_components out of range", {"max_components": max_components, "available": scores.shape[0]})
    results = []
    for k in range(1, max_components + 1):
        points = canonical_points(scores, list(range(k)), feature)
        results.append(hopkins(points, m=m, reps=reps, seed=seed, region=region, classical=classical))
    return results


def interpret_hopkins(result: HopkinsResult, alpha: float = 0.1) -> str:
    """Verbal reading of a Hopkins result."""
    if result.H > CLUSTERING_THRESHOLD:
        return "clustering tendency"
    if result.p_value < alpha:
        return "possible clustering" if result.H > 0.5 else "regular (repelling)"
    return "spatially random"
