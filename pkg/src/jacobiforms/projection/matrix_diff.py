"""Exact action of constant-coefficient matrix differential operators on ``det(y)^alpha``.

The operator matrix is ``D = [(1 + delta_ab)/2 * d/dy_ab]``.  Derivatives are
applied one symbol at a time with the rules

    D_ab det(y)^beta = beta det(y)^beta u_ab
    D_ab u_cd        = -(u_ac u_bd + u_ad u_bc)/2

where ``u = y^{-1}``.  The result is substituted at a positive definite
rational matrix ``h``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping

import sympy
from mpmath import mp

from ..config import resolve_precision
from ..errors import NonPositiveError
from ..forms import linalg
from ..numth.exact import ExactProduct, fraction_to_mpf, to_fraction
from .polynomials import Monomial, SymPoly, pair_index, pairs, symbol_matrix, symbols

logger = logging.getLogger(__name__)

ALPHA = sympy.Symbol("alpha")


def _ring_scalar(value: Any, symbolic: bool):
    value = to_fraction(value)
    if symbolic:
        return sympy.Poly(sympy.Rational(value.numerator, value.denominator), ALPHA, domain="QQ")
    return value


def _is_zero(value: Any) -> bool:
    return value.is_zero if isinstance(value, sympy.Poly) else value == 0


@dataclass(frozen=True)
class InvDetPolynomial:
    """``det(y)^beta * sum c_m(alpha) u^m`` with ``u = y^{-1}``.

    ``beta`` is either a Fraction or the polynomial ``alpha + shift``; the
    coefficients live in the same ring.
    """

    n: int
    terms: Mapping[Monomial, Any]
    beta: Any

    @property
    def symbolic(self) -> bool:
        return isinstance(self.beta, sympy.Poly)

    @classmethod
    def power(cls, n: int, alpha: Any = None, shift: int = 0) -> "InvDetPolynomial":
        """``det(y)^(alpha + shift)``; ``alpha=None`` keeps it symbolic."""
        symbolic = alpha is None
        if symbolic:
            beta = sympy.Poly(ALPHA + shift, ALPHA, domain="QQ")
        else:
            beta = to_fraction(alpha) + shift
        width = n * (n + 1) // 2
        return cls(n, {(0,) * width: _ring_scalar(1, symbolic)}, beta)

    def differentiate(self, a: int, b: int) -> "InvDetPolynomial":
        n = self.n
        ab = pair_index(n, a, b)
        minus_half = _ring_scalar(Fraction(-1, 2), self.symbolic)
        out: Dict[Monomial, Any] = {}

        def deposit(mono: Monomial, value: Any) -> None:
            out[mono] = out[mono] + value if mono in out else value

        for mono, c in self.terms.items():
            bumped = list(mono)
            bumped[ab] += 1
            deposit(tuple(bumped), self.beta * c)
            for idx, (p, q) in enumerate(pairs(n)):
                e = mono[idx]
                if not e:
                    continue
                scale = c * minus_half * _ring_scalar(e, self.symbolic)
                for (i1, j1), (i2, j2) in (((a, p), (b, q)), ((a, q), (b, p))):
                    nxt = list(mono)
                    nxt[idx] -= 1
                    nxt[pair_index(n, i1, j1)] += 1
                    nxt[pair_index(n, i2, j2)] += 1
                    deposit(tuple(nxt), scale)
        return InvDetPolynomial(n, {m: c for m, c in out.items() if not _is_zero(c)}, self.beta)

    def apply(self, operator: SymPoly) -> "InvDetPolynomial":
        """Apply ``operator(D)``, reading its variables as the entries of ``D``."""
        if operator.n != self.n:
            raise ValueError("operator and function live in different matrix sizes")
        total: Dict[Monomial, Any] = {}
        for mono, coefficient in operator.items():
            value = self
            for idx, (a, b) in enumerate(pairs(self.n)):
                for _ in range(mono[idx]):
                    value = value.differentiate(a, b)
            factor = _ring_scalar(coefficient, self.symbolic)
            for m, c in value.terms.items():
                total[m] = total[m] + factor * c if m in total else factor * c
        return InvDetPolynomial(self.n, {m: c for m, c in total.items() if not _is_zero(c)}, self.beta)

    def substitute(self, h: linalg.Matrix) -> Any:
        """``sum c_m (h^{-1})^m`` (the factor ``det(h)^beta`` is left aside)."""
        inv = linalg.inverse(h)
        values = [inv[a][b] for a, b in pairs(self.n)]
        total = _ring_scalar(0, self.symbolic)
        for mono, c in self.terms.items():
            product = Fraction(1)
            for x, e in zip(values, mono):
                if e:
                    product *= x ** e
            total = total + c * _ring_scalar(product, self.symbolic)
        return total


@dataclass(frozen=True)
class DetPowerValue:
    """``coefficient * base^exponent``.

    With a symbolic ``alpha`` both ``coefficient`` and ``exponent`` are
    polynomials in ``alpha``; otherwise they are Fractions.
    """

    coefficient: Any
    base: Fraction
    exponent: Any

    @property
    def symbolic(self) -> bool:
        return isinstance(self.coefficient, sympy.Poly)

    def at(self, alpha: Any) -> "DetPowerValue":
        """Specialize a symbolic value at a rational ``alpha``."""
        if not self.symbolic:
            return self
        value = sympy.Rational(*to_fraction(alpha).as_integer_ratio())
        return DetPowerValue(
            to_fraction(self.coefficient.eval(value)),
            self.base,
            to_fraction(self.exponent.eval(value)),
        )

    def exact(self) -> ExactProduct:
        if self.symbolic:
            raise ValueError("specialize alpha before asking for an exact value")
        return ExactProduct.rational(self.coefficient) * ExactProduct.power(self.base, self.exponent)

    def relative(self, exponent: Any) -> Fraction:
        """``value / base^exponent``, which must leave an integral power of ``base``."""
        if self.symbolic:
            raise ValueError("specialize alpha before rebasing")
        shift = self.exponent - to_fraction(exponent)
        if shift.denominator != 1:
            raise ValueError(f"exponents differ by the non-integer {shift}")
        return self.coefficient * self.base ** int(shift)

    def numeric(self, precision: int | None = None):
        if self.symbolic:
            raise ValueError("specialize alpha before evaluating")
        with mp.workprec(resolve_precision(precision)):
            return fraction_to_mpf(self.coefficient) * mp.power(
                fraction_to_mpf(self.base), fraction_to_mpf(self.exponent)
            )

    def __str__(self) -> str:
        if self.symbolic:
            return f"({self.coefficient.as_expr()}) * {self.base}^({self.exponent.as_expr()})"
        return f"{self.coefficient} * {self.base}^({self.exponent})"


def _check_h(h: Any) -> linalg.Matrix:
    h = linalg.as_matrix(h)
    if not linalg.is_symmetric(h):
        raise ValueError(f"h must be symmetric: {linalg.format_matrix(h)}")
    if linalg.det(h) == 0:
        raise NonPositiveError(f"h is singular: {linalg.format_matrix(h)}")
    if not linalg.is_positive_definite(h):
        raise NonPositiveError(f"h is not positive definite: {linalg.format_matrix(h)}")
    return h


def matrix_diff_apply(R: SymPoly, alpha: Any, h: Any) -> DetPowerValue:
    """``[R(D) det(y)^alpha]`` at ``y = h`` as ``c * det(h)^(alpha - s)``.

    ``R`` is taken as written: callers wanting ``R(-D)`` pass ``R.signed()``.
    ``alpha=None`` keeps the exponent symbolic.  The rebasing shift ``s`` is
    ``deg(R) // n``, so ``R = det(D)`` gives an exponent ``alpha - 1``.
    """
    h = _check_h(h)
    n = len(h)
    if R.n != n:
        raise ValueError(f"operator is {R.n}x{R.n} but h is {n}x{n}")
    start = InvDetPolynomial.power(n, alpha)
    applied = start.apply(R)
    coefficient = applied.substitute(h)
    det_h = linalg.det(h)
    shift = R.degree // n
    factor = det_h ** shift
    if start.symbolic:
        coefficient = coefficient * _ring_scalar(factor, True)
        exponent = start.beta - _ring_scalar(shift, True)
    else:
        coefficient = coefficient * factor
        exponent = start.beta - shift
    logger.debug("R=%s alpha=%s h=%s -> %s", R, alpha, linalg.format_matrix(h), coefficient)
    return DetPowerValue(coefficient, det_h, exponent)


def brute_force_diff_oracle(R: SymPoly, alpha: Any, h: Any) -> Fraction:
    """``[R(D) det(y)^alpha](h) / det(h)^alpha`` by plain symbolic differentiation.

    Independent of the derivation rules: builds ``det(y)^alpha`` over a
    symmetric symbol matrix and differentiates it term by term.
    """
    h = _check_h(h)
    n = len(h)
    alpha_q = to_fraction(alpha)
    alpha_s = sympy.Rational(alpha_q.numerator, alpha_q.denominator)
    y_syms = symbols(n, "y")
    base = symbol_matrix(n, "y").det(method="berkowitz") ** alpha_s
    total = sympy.Integer(0)
    for mono, coefficient in R.items():
        g = base
        for idx, (a, b) in enumerate(pairs(n)):
            weight = sympy.Integer(1) if a == b else sympy.Rational(1, 2)
            for _ in range(mono[idx]):
                g = weight * sympy.diff(g, y_syms[idx])
        total += sympy.Rational(coefficient.numerator, coefficient.denominator) * g
    at_h = {y_syms[idx]: sympy.Rational(h[a][b].numerator, h[a][b].denominator) for idx, (a, b) in enumerate(pairs(n))}
    det_h = linalg.det(h)
    ratio = sympy.expand(total.subs(at_h) / sympy.Rational(det_h.numerator, det_h.denominator) ** alpha_s)
    if not ratio.is_Rational:
        ratio = sympy.nsimplify(sympy.simplify(ratio))
    if not ratio.is_Rational:
        raise ValueError(f"oracle value {ratio} is not rational")
    return to_fraction(ratio)
