"""Exception types shared across jacobiforms."""

from __future__ import annotations


class JacobiFormsError(RuntimeError):
    """Base class for computational failures."""


class PoleError(JacobiFormsError):
    """Raised when a Gamma factor or L-function is evaluated at a pole."""


class NonRationalRatioError(JacobiFormsError):
    """Raised when a ratio of multivariate Gamma values is not rational."""


class DomainError(JacobiFormsError):
    """Raised when arguments fall outside a formula's stated domain."""


class WeightBoundError(DomainError):
    """Raised when the weight is too small for a projection or pairing."""


class WindowError(DomainError):
    """Raised when a special-value argument is outside its admissible window."""


class NonPositiveError(DomainError):
    """Raised when a matrix that must be positive definite is not."""


class InconsistencyError(JacobiFormsError):
    """Raised when Fourier data contradicts the theta decomposition."""


class ConvergenceError(JacobiFormsError):
    """Raised when a quadrature or series does not reach the requested accuracy."""


class VanishingFactorError(JacobiFormsError):
    """Raised when an Euler factor evaluates to zero."""


class UsageError(ValueError):
    """Raised for malformed command-line input."""


class CorpusError(JacobiFormsError):
    """Raised when a corpus file cannot be parsed or violates an invariant."""

    def __init__(self, message: str, *, line: int | None = None, path: str | None = None) -> None:
        self.line = line
        self.path = path
        location = ""
        if path is not None:
            location = f"{path}:"
        if line is not None:
            location = f"{location}{line}: "
        elif location:
            location = f"{location} "
        super().__init__(f"{location}{message}")
