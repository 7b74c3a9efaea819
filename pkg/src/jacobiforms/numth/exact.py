"""Exact rationals and structured products of rational powers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Tuple

import sympy
from mpmath import mp

RationalLike = Any


def to_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, strings ``"p/q"``, Fractions and sympy Rationals to a Fraction.

    Floats are rejected: every exact quantity must enter the library exactly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        return Fraction(text)
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a Fraction or 'p/q' string")
    numerator = getattr(value, "p", None)
    denominator = getattr(value, "q", None)
    if isinstance(numerator, int) and isinstance(denominator, int):
        return Fraction(numerator, denominator)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def format_fraction(value: Fraction) -> str:
    """Serialize a Fraction as ``p`` or ``p/q``."""
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_integral(value: Fraction) -> bool:
    return to_fraction(value).denominator == 1


def is_half_integral(value: Fraction) -> bool:
    """True when ``value`` lies in (1/2)Z."""
    return (2 * to_fraction(value)).denominator == 1


def fraction_to_mpf(value: Fraction):
    value = to_fraction(value)
    return mp.mpf(value.numerator) / value.denominator


def mpf_to_fraction(value) -> Fraction:
    """Exact Fraction equal to a finite mpf."""
    mantissa, exponent = mp.mpf(value).man_exp
    if exponent >= 0:
        return Fraction(int(mantissa) * (1 << int(exponent)))
    return Fraction(int(mantissa), 1 << int(-exponent))


def _exact_root(value: int, degree: int) -> int | None:
    root, exact = sympy.integer_nthroot(value, degree)
    return int(root) if exact else None


def _split_power(base: Fraction, exponent: Fraction) -> Tuple[Fraction, Fraction]:
    """Return (folded, remainder) with remainder in [0, 1) and base**remainder irrational.

    Perfect powers such as ``4**(1/2)`` fold completely into the rational part.
    """
    whole = math.floor(exponent)
    folded, remainder = base ** whole, exponent - whole
    if remainder:
        degree = remainder.denominator
        top = _exact_root(base.numerator, degree)
        bottom = _exact_root(base.denominator, degree)
        if top is not None and bottom is not None:
            return folded * Fraction(top, bottom) ** remainder.numerator, Fraction(0)
    return folded, remainder


@dataclass(frozen=True)
class ExactProduct:
    """Value ``coefficient * pi**pi_exponent * prod(base**exp) * prod(symbol**exp)``.

    Radical exponents are kept in ``[0, 1)``; integral parts are folded into
    the coefficient. Symbols (for instance an unevaluated volume) carry
    integer exponents. ``sign_unknown`` marks values only known up to sign.
    """

    coefficient: Fraction
    pi_exponent: Fraction = Fraction(0)
    radicals: Tuple[Tuple[Fraction, Fraction], ...] = ()
    symbols: Tuple[Tuple[str, int], ...] = ()
    sign_unknown: bool = False

    @classmethod
    def build(
        cls,
        coefficient: RationalLike = 1,
        *,
        pi_exponent: RationalLike = 0,
        radicals: Iterable[Tuple[RationalLike, RationalLike]] = (),
        symbols: Mapping[str, int] | Iterable[Tuple[str, int]] = (),
        sign_unknown: bool = False,
    ) -> "ExactProduct":
        coeff = to_fraction(coefficient)
        merged: Dict[Fraction, Fraction] = {}
        for base, exponent in radicals:
            base_q = to_fraction(base)
            exp_q = to_fraction(exponent)
            if base_q <= 0:
                raise ValueError(f"radical base must be positive, got {base_q}")
            if base_q == 1 or exp_q == 0:
                continue
            merged[base_q] = merged.get(base_q, Fraction(0)) + exp_q

        kept = []
        for base_q in sorted(merged):
            folded, remainder = _split_power(base_q, merged[base_q])
            coeff *= folded
            if remainder:
                kept.append((base_q, remainder))

        symbol_items = symbols.items() if isinstance(symbols, Mapping) else symbols
        symbol_map: Dict[str, int] = {}
        for name, exponent in symbol_items:
            symbol_map[name] = symbol_map.get(name, 0) + int(exponent)
        symbol_tuple = tuple(sorted((name, exp) for name, exp in symbol_map.items() if exp))

        if coeff == 0:
            return cls(Fraction(0))
        return cls(coeff, to_fraction(pi_exponent), tuple(kept), symbol_tuple, sign_unknown)

    @classmethod
    def rational(cls, value: RationalLike) -> "ExactProduct":
        return cls.build(value)

    @classmethod
    def power(cls, base: RationalLike, exponent: RationalLike) -> "ExactProduct":
        return cls.build(1, radicals=[(base, exponent)])

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0

    @property
    def is_rational(self) -> bool:
        return not self.radicals and not self.symbols and self.pi_exponent == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not a rational number")
        return self.coefficient

    def _combine(self, other: "ExactProduct", sign: int) -> "ExactProduct":
        if self.is_zero or other.is_zero:
            if sign < 0 and other.is_zero:
                raise ZeroDivisionError("division by an exact zero")
            return ExactProduct(Fraction(0))
        coefficient = self.coefficient * other.coefficient if sign > 0 else self.coefficient / other.coefficient
        radicals = list(self.radicals) + [(base, sign * exp) for base, exp in other.radicals]
        symbols = list(self.symbols) + [(name, sign * exp) for name, exp in other.symbols]
        return ExactProduct.build(
            coefficient,
            pi_exponent=self.pi_exponent + sign * other.pi_exponent,
            radicals=radicals,
            symbols=symbols,
            sign_unknown=self.sign_unknown or other.sign_unknown,
        )

    def __mul__(self, other: Any) -> "ExactProduct":
        if not isinstance(other, ExactProduct):
            other = ExactProduct.rational(other)
        return self._combine(other, 1)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "ExactProduct":
        if not isinstance(other, ExactProduct):
            other = ExactProduct.rational(other)
        return self._combine(other, -1)

    def __rtruediv__(self, other: Any) -> "ExactProduct":
        return ExactProduct.rational(other)._combine(self, -1)

    def __neg__(self) -> "ExactProduct":
        return ExactProduct(-self.coefficient, self.pi_exponent, self.radicals, self.symbols, self.sign_unknown)

    def __pow__(self, exponent: int) -> "ExactProduct":
        if not isinstance(exponent, int):
            raise TypeError("ExactProduct only supports integer powers")
        if exponent == 0:
            return ExactProduct.rational(1)
        if self.is_zero:
            if exponent < 0:
                raise ZeroDivisionError("zero to a negative power")
            return self
        return ExactProduct.build(
            self.coefficient ** exponent,
            pi_exponent=self.pi_exponent * exponent,
            radicals=[(base, exp * exponent) for base, exp in self.radicals],
            symbols=[(name, exp * exponent) for name, exp in self.symbols],
            sign_unknown=self.sign_unknown,
        )

    def numeric(self, precision: int | None = None, *, symbols: Mapping[str, Any] | None = None):
        """Evaluate to an mpmath number; every symbol must be supplied."""
        from ..config import resolve_precision

        bits = resolve_precision(precision)
        values = dict(symbols or {})
        with mp.workprec(bits):
            result = fraction_to_mpf(self.coefficient)
            if self.pi_exponent:
                result *= mp.power(mp.pi, fraction_to_mpf(self.pi_exponent))
            for base, exponent in self.radicals:
                result *= mp.power(fraction_to_mpf(base), fraction_to_mpf(exponent))
            for name, exponent in self.symbols:
                if name not in values:
                    raise ValueError(f"symbol '{name}' has no numeric value")
                result *= mp.power(mp.mpmathify(values[name]), exponent)
            return +result

    def as_record(self) -> Dict[str, Any]:
        return {
            "coefficient": format_fraction(self.coefficient),
            "pi_exponent": format_fraction(self.pi_exponent),
            "radicals": [[format_fraction(base), format_fraction(exp)] for base, exp in self.radicals],
            "symbols": [[name, exp] for name, exp in self.symbols],
            "sign_unknown": self.sign_unknown,
        }

    def __str__(self) -> str:
        parts = [format_fraction(self.coefficient)]
        if self.pi_exponent:
            parts.append(f"pi^({format_fraction(self.pi_exponent)})")
        for base, exponent in self.radicals:
            parts.append(f"({format_fraction(base)})^({format_fraction(exponent)})")
        for name, exponent in self.symbols:
            parts.append(f"{name}^({exponent})")
        text = " * ".join(parts)
        return f"±({text})" if self.sign_unknown else text
