"""Sparse polynomials in the entries of a symmetric ``n x n`` matrix of symbols."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Sequence, Tuple

import sympy

from ..numth.exact import format_fraction, to_fraction

Monomial = Tuple[int, ...]

_VARIABLE = re.compile(r"^([a-z]+)(\d)(\d)(?:\^(\d+))?$")


def pairs(n: int) -> List[Tuple[int, int]]:
    """Upper-triangular positions ``(a, b)``, ``a <= b``, in a fixed order."""
    return [(a, b) for a in range(n) for b in range(a, n)]


def pair_index(n: int, a: int, b: int) -> int:
    if a > b:
        a, b = b, a
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"position ({a},{b}) outside a {n}x{n} matrix")
    return pairs(n).index((a, b))


def symbols(n: int, prefix: str) -> List[sympy.Symbol]:
    return [sympy.Symbol(f"{prefix}{a + 1}{b + 1}") for a, b in pairs(n)]


def symbol_matrix(n: int, prefix: str) -> sympy.Matrix:
    """Symmetric sympy matrix whose ``(a,b)`` and ``(b,a)`` entries share a symbol."""
    syms = symbols(n, prefix)
    return sympy.Matrix(n, n, lambda i, j: syms[pair_index(n, i, j)])


@dataclass(frozen=True)
class SymPoly:
    """``sum c_m x^m`` with ``x`` the upper-triangular entries of a symmetric matrix."""

    n: int
    terms: Mapping[Monomial, Fraction]
    prefix: str = "u"

    def __post_init__(self) -> None:
        width = self.n * (self.n + 1) // 2
        cleaned: Dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != width or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for n={self.n}")
            c = to_fraction(c)
            if c:
                cleaned[mono] = cleaned.get(mono, Fraction(0)) + c
        object.__setattr__(self, "terms", dict(sorted((m, c) for m, c in cleaned.items() if c)))

    @classmethod
    def zero(cls, n: int, prefix: str = "u") -> "SymPoly":
        return cls(n, {}, prefix)

    @classmethod
    def constant(cls, n: int, value: Any, prefix: str = "u") -> "SymPoly":
        return cls(n, {(0,) * (n * (n + 1) // 2): value}, prefix)

    @classmethod
    def variable(cls, n: int, a: int, b: int, prefix: str = "u") -> "SymPoly":
        mono = [0] * (n * (n + 1) // 2)
        mono[pair_index(n, a, b)] = 1
        return cls(n, {tuple(mono): Fraction(1)}, prefix)

    def _check(self, other: "SymPoly") -> None:
        if self.n != other.n:
            raise ValueError("polynomials live in different matrix sizes")

    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._check(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return SymPoly(self.n, terms, self.prefix)

    def __neg__(self) -> "SymPoly":
        return self.scaled(-1)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __mul__(self, other: Any) -> "SymPoly":
        if not isinstance(other, SymPoly):
            return self.scaled(other)
        self._check(other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return SymPoly(self.n, terms, self.prefix)

    __rmul__ = __mul__

    def scaled(self, factor: Any) -> "SymPoly":
        factor = to_fraction(factor)
        return SymPoly(self.n, {m: factor * c for m, c in self.terms.items()}, self.prefix)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    @property
    def is_constant(self) -> bool:
        return self.degree == 0

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * (self.n * (self.n + 1) // 2), Fraction(0))

    def signed(self) -> "SymPoly":
        """``P(-x)``: odd-degree terms change sign."""
        return SymPoly(self.n, {m: (-c if sum(m) % 2 else c) for m, c in self.terms.items()}, self.prefix)

    def evaluate(self, matrix: Sequence[Sequence[Any]]) -> Fraction:
        """Exact value at a symmetric rational matrix."""
        values = [to_fraction(matrix[a][b]) for a, b in pairs(self.n)]
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for x, e in zip(values, mono):
                if e:
                    term *= x ** e
            total += term
        return total

    def to_sympy(self, syms: Sequence[sympy.Symbol] | None = None) -> sympy.Expr:
        syms = symbols(self.n, self.prefix) if syms is None else list(syms)
        expr = sympy.Integer(0)
        for mono, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, e in zip(syms, mono):
                term *= s ** e
            expr += term
        return expr

    @classmethod
    def from_sympy(cls, expr: Any, n: int, prefix: str, syms: Sequence[sympy.Symbol] | None = None) -> "SymPoly":
        syms = symbols(n, prefix) if syms is None else list(syms)
        poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
        return cls(n, {mono: to_fraction(c) for mono, c in poly.terms()}, prefix)

    def renamed(self, prefix: str) -> "SymPoly":
        return SymPoly(self.n, self.terms, prefix)

    def format(self) -> str:
        """``2;-3*u11;1/4*u12^2`` style text; ``0`` for the zero polynomial."""
        if not self.terms:
            return "0"
        names = [f"{self.prefix}{a + 1}{b + 1}" for a, b in pairs(self.n)]
        parts = []
        for mono, c in self.terms.items():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors or abs(c) != 1:
                factors.insert(0, format_fraction(c))
            elif c == -1:
                factors[0] = "-" + factors[0]
            parts.append("*".join(factors))
        return ";".join(parts)

    def __str__(self) -> str:
        return self.format()

    @classmethod
    def parse(cls, text: str, n: int, prefix: str = "u") -> "SymPoly":
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial")
        width = n * (n + 1) // 2
        terms: Dict[Monomial, Fraction] = {}
        for raw in text.split(";"):
            raw = raw.strip().replace(" ", "")
            if not raw:
                continue
            sign = Fraction(1)
            if raw.startswith("-") and not raw[1:2].isdigit():
                sign, raw = Fraction(-1), raw[1:]
            coefficient = sign
            mono = [0] * width
            for factor in raw.split("*"):
                match = _VARIABLE.match(factor)
                if match:
                    name, a, b, power = match.groups()
                    if name != prefix:
                        raise ValueError(f"unknown variable {factor!r}, expected prefix {prefix!r}")
                    mono[pair_index(n, int(a) - 1, int(b) - 1)] += int(power or 1)
                else:
                    try:
                        coefficient *= Fraction(factor)
                    except ValueError as exc:
                        raise ValueError(f"cannot parse polynomial factor {factor!r}") from exc
            key = tuple(mono)
            terms[key] = terms.get(key, Fraction(0)) + coefficient
        return cls(n, terms, prefix)


def det_polynomial(n: int, prefix: str = "d") -> SymPoly:
    """Determinant of the symmetric symbol matrix, e.g. ``d11 d22 - d12^2``."""
    return SymPoly.from_sympy(symbol_matrix(n, prefix).det(method="berkowitz"), n, prefix)


def inverse_substitution(p: SymPoly, degree: int, prefix: str = "y") -> SymPoly:
    """``det(y)^degree p(y^{-1})`` as a polynomial in the entries of ``y``.

    Requires ``degree >= p.degree``.
    """
    if degree < p.degree:
        raise ValueError(f"degree bound {degree} is below the polynomial degree {p.degree}")
    n = p.n
    y = symbol_matrix(n, prefix)
    det = y.det(method="berkowitz")
    adj = sympy.Matrix([[1]]) if n == 1 else y.adjugate(method="berkowitz")
    inv_syms = [adj[a, b] for a, b in pairs(n)]
    expr = sympy.Integer(0)
    for mono, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator) * det ** (degree - sum(mono))
        for entry, e in zip(inv_syms, mono):
            term *= entry ** e
        expr += term
    return SymPoly.from_sympy(expr, n, prefix)


def det_form_to_general(q: SymPoly, m: int, prefix: str = "u") -> SymPoly:
    """``p(u) = det(u)^m Q(u^{-1})`` for ``Q`` of degree at most ``m``."""
    return inverse_substitution(q, m, prefix=prefix)
