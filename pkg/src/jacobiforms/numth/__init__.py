"""Exact arithmetic, characters and special values."""

from __future__ import annotations

from .characters import DirichletCharacter, QuadCharacterPsiS, kronecker_symbol, psi_S
from .exact import ExactProduct, format_fraction, to_fraction
from .recognize import rational_recognize, recognition_report
from .special import dirichlet_L, dirichlet_L_depleted, gamma_n, gamma_n_ratio

__all__ = [
    "DirichletCharacter",
    "QuadCharacterPsiS",
    "ExactProduct",
    "dirichlet_L",
    "dirichlet_L_depleted",
    "format_fraction",
    "gamma_n",
    "gamma_n_ratio",
    "kronecker_symbol",
    "psi_S",
    "rational_recognize",
    "recognition_report",
    "to_fraction",
]
