"""Index matrices S."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

from . import linalg
from .linalg import Matrix


@dataclass(frozen=True)
class IndexMatrix:
    """Positive definite half-integral symmetric ``l x l`` matrix."""

    rows: Matrix

    def __post_init__(self) -> None:
        if not linalg.is_symmetric(self.rows):
            raise ValueError(f"index matrix must be symmetric: {linalg.format_matrix(self.rows)}")
        for i, row in enumerate(self.rows):
            for j, entry in enumerate(row):
                if i == j and entry.denominator != 1:
                    raise ValueError(f"diagonal entry S[{i}][{i}]={entry} must be integral")
                if i != j and (2 * entry).denominator != 1:
                    raise ValueError(f"off-diagonal entry S[{i}][{j}]={entry} must lie in (1/2)Z")
        if not linalg.is_positive_definite(self.rows):
            raise ValueError(f"index matrix must be positive definite: {linalg.format_matrix(self.rows)}")

    @classmethod
    def of(cls, value: Any) -> "IndexMatrix":
        if isinstance(value, IndexMatrix):
            return value
        return cls(linalg.as_matrix(value))

    @property
    def l(self) -> int:
        return len(self.rows)

    @cached_property
    def det(self) -> Fraction:
        return linalg.det(self.rows)

    @cached_property
    def det_2s(self) -> int:
        return int(self.det * 2 ** self.l)

    @cached_property
    def inverse(self) -> Matrix:
        return linalg.inverse(self.rows)

    @cached_property
    def two_s(self) -> Matrix:
        return linalg.scale(self.rows, 2)

    @property
    def is_diagonal(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.l) for j in range(self.l) if i != j)

    def inverse_form(self, r: Matrix) -> Matrix:
        """``S^{-1}[r] = r^T S^{-1} r`` (an ``n x n`` matrix)."""
        return linalg.quadratic(self.inverse, r)

    def form(self, x: Matrix) -> Matrix:
        """``S[x] = x^T S x``."""
        return linalg.quadratic(self.rows, x)

    def __str__(self) -> str:
        return linalg.format_matrix(self.rows)
