"""Truncated Fourier expansions of Jacobi forms and their theta components."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Tuple

from ..numth.exact import format_fraction, to_fraction
from . import linalg
from .index import IndexMatrix
from .linalg import Matrix

logger = logging.getLogger(__name__)

Index = Tuple[Matrix, Matrix]


def index_key(t: Any, r: Any, *, n: int, l: int) -> Index:
    """Normalize a ``(t, r)`` pair: ``t`` is ``n x n``, ``r`` is ``l x n``."""
    t_m = linalg.as_matrix(t, rows=n, cols=n)
    if isinstance(r, (list, tuple)) and r and not isinstance(r[0], (list, tuple)):
        r = [[entry] for entry in r] if n == 1 else [list(r)]
    r_m = linalg.as_matrix(r, rows=l, cols=n)
    return t_m, r_m


def discriminant_matrix(S: IndexMatrix, t: Matrix, r: Matrix, lambda_level: int = 1) -> Matrix:
    """``4t - lambda S^{-1}[r]``, positive semi-definite on the support."""
    return linalg.sub(linalg.scale(t, 4), linalg.scale(S.inverse_form(r), lambda_level))


def sort_key(index: Index) -> Tuple:
    t, r = index
    return (linalg.trace(t), t, r)


def format_index(index: Index) -> str:
    t, r = index
    return f"t={linalg.format_matrix(t)} r={linalg.format_matrix(r)}"


@dataclass(frozen=True)
class JacobiExpansion:
    """Fourier coefficients ``c(t, r)`` with ``tr(t) <= cap``.

    The series is ``sum c(t,r) e(tr(t tau)/lambda_level + tr(r^T w))``.
    Every stored index satisfies ``4t - lambda_level S^{-1}[r] >= 0``
    (strictly positive for cuspidal expansions).
    """

    n: int
    k: Fraction
    S: IndexMatrix
    coefficients: Mapping[Index, Fraction]
    cap: Fraction
    lambda_level: int = 1
    cuspidal: bool = False
    level: int = 1
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", to_fraction(self.k))
        object.__setattr__(self, "cap", to_fraction(self.cap))
        if self.n < 1:
            raise ValueError(f"degree must be positive, got {self.n}")
        if self.lambda_level < 1:
            raise ValueError(f"lambda_level must be a positive integer, got {self.lambda_level}")
        if (2 * self.k).denominator != 1:
            raise ValueError(f"weight must be integral or half-integral, got {self.k}")
        cleaned: Dict[Index, Fraction] = {}
        for (t, r), value in self.coefficients.items():
            value = to_fraction(value)
            if value == 0:
                continue
            key = index_key(t, r, n=self.n, l=self.S.l)
            self._check_index(key)
            cleaned[key] = value
        object.__setattr__(self, "coefficients", dict(sorted(cleaned.items(), key=lambda item: sort_key(item[0]))))

    def _check_index(self, key: Index) -> None:
        t, r = key
        if not linalg.is_symmetric(t):
            raise ValueError(f"t must be symmetric at {format_index(key)}")
        if not linalg.is_integral(r):
            raise ValueError(f"r must be integral at {format_index(key)}")
        if linalg.trace(t) > self.cap:
            raise ValueError(f"index {format_index(key)} exceeds the trace cap {self.cap}")
        h = discriminant_matrix(self.S, t, r, self.lambda_level)
        if self.cuspidal:
            if not linalg.is_positive_definite(h):
                raise ValueError(f"cuspidal expansion has non-positive index {format_index(key)}")
        elif not linalg.is_positive_semidefinite(h):
            raise ValueError(f"index {format_index(key)} violates 4t - lambda S^-1[r] >= 0")

    @property
    def l(self) -> int:
        return self.S.l

    def coefficient(self, t: Any, r: Any) -> Fraction:
        return self.coefficients.get(index_key(t, r, n=self.n, l=self.l), Fraction(0))

    def items(self) -> Iterator[Tuple[Index, Fraction]]:
        return iter(self.coefficients.items())

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def replace(self, **changes: Any) -> "JacobiExpansion":
        data = {
            "n": self.n,
            "k": self.k,
            "S": self.S,
            "coefficients": self.coefficients,
            "cap": self.cap,
            "lambda_level": self.lambda_level,
            "cuspidal": self.cuspidal,
            "level": self.level,
            "label": self.label,
        }
        data.update(changes)
        return JacobiExpansion(**data)

    def scaled(self, factor: Any) -> "JacobiExpansion":
        factor = to_fraction(factor)
        return self.replace(coefficients={key: factor * value for key, value in self.items()})

    def truncated(self, cap: Any) -> "JacobiExpansion":
        cap = min(to_fraction(cap), self.cap)
        return self.replace(
            coefficients={key: value for key, value in self.items() if linalg.trace(key[0]) <= cap},
            cap=cap,
        )

    def __add__(self, other: "JacobiExpansion") -> "JacobiExpansion":
        self._check_compatible(other)
        cap = min(self.cap, other.cap)
        merged: Dict[Index, Fraction] = {}
        for source in (self, other):
            for key, value in source.items():
                if linalg.trace(key[0]) <= cap:
                    merged[key] = merged.get(key, Fraction(0)) + value
        return self.replace(coefficients=merged, cap=cap, cuspidal=self.cuspidal and other.cuspidal, label="")

    def _check_compatible(self, other: "JacobiExpansion") -> None:
        if (self.n, self.k, self.S, self.lambda_level) != (other.n, other.k, other.S, other.lambda_level):
            raise ValueError("expansions differ in degree, weight, index or level")

    def as_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "l": self.l,
            "k": format_fraction(self.k),
            "S": linalg.format_matrix(self.S.rows),
            "lambda": self.lambda_level,
            "cap": format_fraction(self.cap),
            "cuspidal": self.cuspidal,
            "coefficients": [
                {"t": linalg.format_matrix(t), "r": linalg.format_matrix(r), "c": format_fraction(c)}
                for (t, r), c in self.items()
            ],
        }


@dataclass(frozen=True)
class ThetaComponents:
    """Theta components ``f_h`` indexed by classes ``h`` of ``Lambda1/Lambda2``.

    ``Lambda1 = S^{-1} Z^{l x n}`` and ``Lambda2 = 2 Z^{l x n}``; each component
    maps an ``n x n`` exponent matrix ``D`` to a coefficient.
    """

    n: int
    S: IndexMatrix
    weight: Fraction
    components: Mapping[Matrix, Mapping[Matrix, Fraction]]
    cap: Fraction
    lambda_level: int = 1
    experimental: bool = False
    class_count: int = field(default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", to_fraction(self.weight))
        object.__setattr__(self, "cap", to_fraction(self.cap))
        cleaned = {}
        for h, series in self.components.items():
            terms = {exponent: to_fraction(c) for exponent, c in series.items() if c}
            if terms:
                cleaned[h] = dict(sorted(terms.items(), key=lambda item: (linalg.trace(item[0]), item[0])))
        object.__setattr__(self, "components", dict(sorted(cleaned.items())))
        if not self.class_count:
            object.__setattr__(self, "class_count", self.S.det_2s ** self.n)

    @property
    def lambda1_basis(self) -> Matrix:
        return self.S.inverse

    @property
    def lambda2_basis(self) -> Matrix:
        return linalg.scale(linalg.identity(self.S.l), 2)

    def component(self, h: Any) -> Dict[Matrix, Fraction]:
        key = linalg.as_matrix(h, rows=self.S.l, cols=self.n)
        return dict(self.components.get(linalg.reduce_mod(key, 2), {}))

    def exponents(self) -> List[Matrix]:
        return [exponent for series in self.components.values() for exponent in series]

    @property
    def is_zero(self) -> bool:
        return not self.components
