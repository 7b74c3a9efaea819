"""Matrix differential operators and holomorphic projection."""

from __future__ import annotations

from .hol import NearlyHolExpansion, coeff_integral_oracle, hol_project, hol_project_improved
from .matrix_diff import DetPowerValue, InvDetPolynomial, brute_force_diff_oracle, matrix_diff_apply
from .polynomials import SymPoly, det_polynomial

__all__ = [
    "DetPowerValue",
    "InvDetPolynomial",
    "NearlyHolExpansion",
    "SymPoly",
    "brute_force_diff_oracle",
    "coeff_integral_oracle",
    "det_polynomial",
    "hol_project",
    "hol_project_improved",
    "matrix_diff_apply",
]
