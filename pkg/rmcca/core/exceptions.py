"""Custom exceptions for rmcca.

Errors fall into two families that the command line maps to exit codes:
``ValidationError`` (bad input, exit 1) and ``NumericalError`` (exit 2).
"""

from typing import Any, Dict, Optional


class RMCCAError(Exception):
    """Base exception for all rmcca errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


class ValidationError(RMCCAError):
    """Raised when inputs, shapes or configuration are invalid."""

    pass


class NumericalError(RMCCAError):
    """Raised when a numerical procedure cannot produce a valid result."""

    pass


# Linear algebra

class NonFiniteError(NumericalError):
    """Raised when a matrix or value contains NaN or Inf."""

    pass


class NotSymmetricError(NumericalError):
    """Raised when a matrix expected to be symmetric is not."""

    pass


class AllTruncatedError(NumericalError):
    """Raised when spectral truncation removes every eigenvalue."""

    pass


class ConvergenceError(NumericalError):
    """Raised when an iterative eigensolver exceeds its sweep budget."""

    pass


class DimensionMismatchError(ValidationError):
    """Raised when matrix dimensions do not agree."""

    pass


class InsufficientRankError(NumericalError):
    """Raised when fewer components survive deflation than requested."""

    pass


# Data and configuration

class InputFileError(ValidationError):
    """Raised when an input file cannot be read."""

    pass


class OutputFileError(ValidationError):
    """Raised when an output file cannot be written."""

    pass


class SchemaError(ValidationError):
    """Raised when a CSV header does not match the expected columns."""

    pass


class MissingCellError(ValidationError):
    """Raised when a (unit, feature, time, variable) cell is absent."""

    pass


class DuplicateCellError(ValidationError):
    """Raised when a (unit, feature, time, variable) cell appears twice."""

    pass


class NonNumericValueError(ValidationError):
    """Raised when a measurement is not a finite number."""

    pass


class InconsistentShapeError(ValidationError):
    """Raised when a feature's variable set differs across units."""

    pass


class UnknownKeyError(ValidationError):
    """Raised when a configuration key is not recognised."""

    pass


class InvalidValueError(ValidationError):
    """Raised when a configuration or parameter value is invalid."""

    pass


class InvalidComponentIndexError(ValidationError):
    """Raised when a canonical component index is out of range."""

    pass


# Kernel method

class ShapeMismatchError(ValidationError):
    """Raised when two blocks passed to a kernel have different shapes."""

    pass


class DegenerateDistancesError(NumericalError):
    """Raised when the median pairwise block distance is zero."""

    pass


# Functional method

class EvenBasisSizeError(ValidationError):
    """Raised when a Fourier basis size is even or non-positive."""

    pass


class OutOfIntervalError(ValidationError):
    """Raised when an evaluation point lies outside [0, 1]."""

    pass


class UnderdeterminedFitError(ValidationError):
    """Raised when there are fewer time points than basis functions."""

    pass


class SingularDesignError(NumericalError):
    """Raised when the basis design matrix is numerically singular."""

    pass


class InsufficientUnitsError(ValidationError):
    """Raised when too few units are available for covariance estimation."""

    pass


class InvalidVariableIndexError(ValidationError):
    """Raised when a variable index is out of range."""

    pass


# Clusterability

class TooManyProbesError(ValidationError):
    """Raised when the Hopkins probe count is not smaller than the sample."""

    pass


class DegenerateRegionError(NumericalError):
    """Raised when the Hopkins sampling region has zero volume."""

    pass


class OutOfRangeError(ValidationError):
    """Raised when an argument lies outside its mathematical domain."""

    pass


# Experiments

class SingularCovarianceError(NumericalError):
    """Raised when a sample covariance matrix is singular."""

    pass
