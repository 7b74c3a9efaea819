"""Fourier expansions, theta series and the Jacobi group."""

from __future__ import annotations

from .evaluate import evaluate, f_star_evaluate, growth_profile
from .expansion import JacobiExpansion, ThetaComponents
from .group import GroupElement, JacobiPoint, delta, eval_J
from .index import IndexMatrix
from .theta import (
    is_cuspidal,
    property_A_check,
    theta_decompose,
    theta_pairing_factor,
    theta_reconstruct,
    theta_series,
)

__all__ = [
    "GroupElement",
    "IndexMatrix",
    "JacobiExpansion",
    "JacobiPoint",
    "ThetaComponents",
    "delta",
    "eval_J",
    "evaluate",
    "f_star_evaluate",
    "growth_profile",
    "is_cuspidal",
    "property_A_check",
    "theta_decompose",
    "theta_pairing_factor",
    "theta_reconstruct",
    "theta_series",
]
