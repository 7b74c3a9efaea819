"""Environment-backed defaults."""

from __future__ import annotations

import os
from fractions import Fraction

_DEFAULT_PRECISION = 128
_MIN_PRECISION = 64
_DEFAULT_TRUNCATION = "6"
_DEFAULT_CUTOFF = 1000
_DEFAULT_TOLERANCE = 1e-8


def _read_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc


def default_precision() -> int:
    """Working precision in bits (``JACOBIFORMS_PRECISION``)."""
    value = _read_int("JACOBIFORMS_PRECISION", _DEFAULT_PRECISION)
    if value < _MIN_PRECISION:
        raise ValueError(f"JACOBIFORMS_PRECISION must be >= {_MIN_PRECISION}, got {value}")
    return value


def default_truncation() -> Fraction:
    """Trace cap for Fourier expansions (``JACOBIFORMS_TRUNCATION``)."""
    raw = os.getenv("JACOBIFORMS_TRUNCATION", _DEFAULT_TRUNCATION)
    try:
        value = Fraction(raw.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"JACOBIFORMS_TRUNCATION must be a rational number, got {raw!r}") from exc
    if value < 0:
        raise ValueError("JACOBIFORMS_TRUNCATION must be >= 0")
    return value


def default_cutoff() -> int:
    """Prime/term cutoff for Euler products and Dirichlet series (``JACOBIFORMS_CUTOFF``)."""
    value = _read_int("JACOBIFORMS_CUTOFF", _DEFAULT_CUTOFF)
    if value < 1:
        raise ValueError("JACOBIFORMS_CUTOFF must be >= 1")
    return value


def default_tolerance() -> float:
    """Relative tolerance for numeric validators (``JACOBIFORMS_TOLERANCE``)."""
    raw = os.getenv("JACOBIFORMS_TOLERANCE")
    if raw is None or not raw.strip():
        return _DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"JACOBIFORMS_TOLERANCE must be a number, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("JACOBIFORMS_TOLERANCE must be > 0")
    return value


def resolve_precision(precision: int | None) -> int:
    """Return ``precision`` or the configured default, enforcing the minimum."""
    if precision is None:
        return default_precision()
    value = int(precision)
    if value < _MIN_PRECISION:
        raise ValueError(f"precision must be >= {_MIN_PRECISION} bits, got {value}")
    return value
