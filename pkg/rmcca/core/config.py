"""Analysis configuration and its flat ``key = value`` document format."""

import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import yaml

from rmcca.core.exceptions import InputFileError, InvalidValueError, UnknownKeyError
from rmcca.core.linalg import EIG_METHODS
from rmcca.core.utils import auto_epsilon, ceil_tenth

METHODS = ("kernel", "functional")
KERNELS = ("gaussian", "linear")
REGIONS = ("box", "hull", "torus")


@dataclass
class AnalysisConfig:
    """Configuration for one MCCA analysis.

    Args:
        method: "kernel" or "functional"
        kernel: Kernel kind for every feature, "gaussian" or "linear"
        kernel_gamma: Gaussian bandwidth, or "median" for the per-feature median heuristic
        epsilon: Regularization, or "auto" for n^(-1/4)
        n_components: Number of canonical components to report
        basis_size: Odd Fourier basis size B (functional method)
        hopkins_m: Hopkins probe count, or "auto" for ceil(n / 10)
        hopkins_reps: Hopkins replications to average
        hopkins_region: Uniform sampling region, "box", "hull" or "torus"
        hopkins_classical: Use exponent 1 instead of the ambient dimension
        rng_seed: Seed for every random stream
        standardize: Z-score each variable before the analysis
        truncation_tol: Null-space deflation threshold (relative)
        eig_method: "auto", "jacobi" or "lapack"
    """

    method: str = "kernel"
    kernel: str = "gaussian"
    kernel_gamma: Union[float, str] = "median"
    epsilon: Union[float, str] = "auto"
    n_components: int = 3
    basis_size: int = 9
    hopkins_m: Union[int, str] = "auto"
    hopkins_reps: int = 100
    hopkins_region: str = "box"
    hopkins_classical: bool = False
    rng_seed: int = 0
    standardize: bool = False
    truncation_tol: float = 1e-10
    eig_method: str = "auto"

    def __post_init__(self):
        """Coerce and validate every field."""
        self.method = _choice("method", self.method, METHODS)
        self.kernel = _choice("kernel", self.kernel, KERNELS)
        self.kernel_gamma = _positive_or_sentinel("kernel_gamma", self.kernel_gamma, "median")
        self.epsilon = _positive_or_sentinel("epsilon", self.epsilon, "auto")
        self.n_components = _integer("n_components", self.n_components, minimum=1)
        self.basis_size = _integer("basis_size", self.basis_size, minimum=1)
        if self.basis_size % 2 == 0:
            raise InvalidValueError("basis_size must be odd (constant plus sine/cosine pairs)", {"key": "basis_size", "value": self.basis_size})
        if self.hopkins_m != "auto":
            self.hopkins_m = _integer("hopkins_m", self.hopkins_m, minimum=1)
        self.hopkins_reps = _integer("hopkins_reps", self.hopkins_reps, minimum=1)
        self.hopkins_region = _choice("hopkins_region", self.hopkins_region, REGIONS)
        self.hopkins_classical = _boolean("hopkins_classical", self.hopkins_classical)
        self.rng_seed = _integer("rng_seed", self.rng_seed, minimum=0)
        self.standardize = _boolean("standardize", self.standardize)
        self.truncation_tol = _positive_or_sentinel("truncation_tol", self.truncation_tol, None)
        self.eig_method = _choice("eig_method", self.eig_method, EIG_METHODS)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> "AnalysisConfig":
        """Build a config from a flat mapping, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        for key in mapping:
            if key not in known:
                raise UnknownKeyError(f"unknown configuration key '{key}'", {"key": key, "known": sorted(known)})
        return cls(**dict(mapping))

    def with_overrides(self, overrides: Mapping[str, Any]) -> "AnalysisConfig":
        """Return a copy with ``overrides`` applied on top of this config."""
        merged = self.to_dict()
        merged.update(overrides)
        return AnalysisConfig.from_mapping(merged)

    def resolve_epsilon(self, n: int) -> float:
        """Epsilon for a sample of ``n`` units."""
        if self.epsilon == "auto":
            return auto_epsilon(n)
        return float(self.epsilon)

    def resolve_hopkins_m(self, n: int) -> int:
        """Hopkins probe count for ``n`` points."""
        if self.hopkins_m == "auto":
            return ceil_tenth(n)
        return int(self.hopkins_m)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return asdict(self)


def _choice(key: str, value: Any, choices) -> str:
    value = str(value).strip().lower()
    if value not in choices:
        raise InvalidValueError(f"{key} must be one of {', '.join(choices)}", {"key": key, "value": value})
    return value


def _integer(key: str, value: Any, minimum: int) -> int:
    if isinstance(value, bool):
        raise InvalidValueError(f"{key} must be an integer", {"key": key, "value": value})
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidValueError(f"{key} must be an integer", {"key": key, "value": value})
    if not number.is_integer():
        raise InvalidValueError(f"{key} must be an integer", {"key": key, "value": value})
    if number < minimum:
        raise InvalidValueError(f"{key} must be at least {minimum}", {"key": key, "value": value})
    return int(number)


def _positive_or_sentinel(key: str, value: Any, sentinel):
    if sentinel is not None and isinstance(value, str) and value.strip().lower() == sentinel:
        return sentinel
    if isinstance(value, bool):
        raise InvalidValueError(f"{key} must be a positive number", {"key": key, "value": value})
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidValueError(f"{key} must be a positive number", {"key": key, "value": value})
    if not math.isfinite(number) or number <= 0.0:
        raise InvalidValueError(f"{key} must be a positive number", {"key": key, "value": value})
    return number


def _boolean(key: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "yes", "on", "1"):
        return True
    if text in ("false", "no", "off", "0"):
        return False
    raise InvalidValueError(f"{key} must be true or false", {"key": key, "value": value})


def _strip_comment(line: str) -> str:
    quote = None
    for i, char in enumerate(line):
        if char in ("'", '"'):
            quote = None if quote == char else (quote or char)
        elif char == "#" and quote is None:
            return line[:i]
    return line


def parse_config_mapping(text: str) -> Dict[str, Any]:
    """Parse ``key = value`` (or ``key: value``) lines into a typed mapping.

    Values are typed with YAML scalar resolution; ``#`` starts a comment.
    """
    mapping: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        positions = [pos for pos in (line.find("="), line.find(":")) if pos > 0]
        if not positions:
            raise InvalidValueError(f"line {lineno}: expected 'key = value'", {"line": raw})
        split = min(positions)
        key = line[:split].strip()
        text_value = line[split + 1:].strip()
        if not key.isidentifier():
            raise InvalidValueError(f"line {lineno}: invalid key '{key}'", {"line": raw})
        if key in mapping:
            raise InvalidValueError(f"line {lineno}: duplicate key '{key}'", {"key": key})
        try:
            value = yaml.safe_load(text_value) if text_value else None
        except yaml.YAMLError as e:
            raise InvalidValueError(f"line {lineno}: cannot parse value for '{key}'", {"key": key, "error": str(e)})
        if value is None:
            raise InvalidValueError(f"line {lineno}: missing value for '{key}'", {"key": key})
        mapping[key] = value
    return mapping


def parse_config(text: str) -> AnalysisConfig:
    """Parse a configuration document; unset keys take their defaults.

    Raises:
        UnknownKeyError: If a key is not an AnalysisConfig field
        InvalidValueError: If a value fails validation (message names the key)
    """
    return AnalysisConfig.from_mapping(parse_config_mapping(text))


def load_config(path: Union[str, Path]) -> AnalysisConfig:
    """Read and parse a configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(f"cannot read config file {path}", {"path": str(path), "error": str(e)})
    return parse_config(text)
