"""Multivariate Gamma and Dirichlet L-values."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from fractions import Fraction
from typing import Any, Dict, List

import sympy
from mpmath import mp

from ..config import resolve_precision
from ..errors import NonRationalRatioError, PoleError
from .characters import DirichletCharacter
from .exact import ExactProduct, fraction_to_mpf, is_half_integral, is_integral, to_fraction

logger = logging.getLogger(__name__)


def _is_pole(x: Fraction) -> bool:
    return is_integral(x) and x <= 0


def _gamma_half_integral(x: Fraction) -> ExactProduct:
    """Exact Gamma(x) for x in (1/2)Z away from the poles."""
    if _is_pole(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if is_integral(x):
        return ExactProduct.rational(math.factorial(int(x) - 1))
    m = int(x - Fraction(1, 2))
    if m >= 0:
        coefficient = Fraction(math.factorial(2 * m), 4 ** m * math.factorial(m))
    else:
        m = -m
        coefficient = Fraction((-4) ** m * math.factorial(m), math.factorial(2 * m))
    return ExactProduct.build(coefficient, pi_exponent=Fraction(1, 2))


def _as_exact(x: Any) -> Fraction | None:
    try:
        return to_fraction(x)
    except TypeError:
        return None


def gamma_n(n: int, x: Any, *, precision: int | None = None):
    """Multivariate Gamma ``pi^(n(n-1)/4) * prod_{i<n} Gamma(x - i/2)``.

    Half-integral rational ``x`` gives an exact :class:`ExactProduct`
    ``q * pi^(m/2)``; any other argument is evaluated numerically.
    """
    if n < 1:
        raise ValueError(f"degree must be positive, got {n}")
    exact = _as_exact(x)
    if exact is not None:
        shifts = [exact - Fraction(i, 2) for i in range(n)]
        for value in shifts:
            if _is_pole(value):
                raise PoleError(f"Gamma_{n}({exact}) has a pole: Gamma({value})")
        if is_half_integral(exact):
            result = ExactProduct.build(1, pi_exponent=Fraction(n * (n - 1), 4))
            for value in shifts:
                result = result * _gamma_half_integral(value)
            return result

    with mp.workprec(resolve_precision(precision)):
        z = fraction_to_mpf(exact) if exact is not None else mp.mpmathify(x)
        result = mp.power(mp.pi, mp.mpf(n * (n - 1)) / 4)
        for i in range(n):
            arg = z - mp.mpf(i) / 2
            if arg.imag == 0 and arg.real <= 0 and mp.isint(arg.real):
                raise PoleError(f"Gamma_{n}({x}) has a pole: Gamma({arg})")
            result *= mp.gamma(arg)
        return +result


def _pochhammer_ratio(x: Fraction, y: Fraction) -> Fraction:
    """Gamma(x)/Gamma(y) for x - y integral."""
    steps = int(x - y)
    result = Fraction(1)
    if steps >= 0:
        for j in range(steps):
            result *= y + j
    else:
        for j in range(-steps):
            result /= x + j
    return result


def gamma_n_ratio(n: int, a: Any, b: Any) -> Fraction:
    """Exact ``Gamma_n(a) / Gamma_n(b)``.

    The factors ``Gamma(a - i/2)`` and ``Gamma(b - j/2)`` are paired by
    residue class modulo 1; the ratio is rational only when both sides
    carry the same number of factors in every class.
    """
    if n < 1:
        raise ValueError(f"degree must be positive, got {n}")
    a_q = to_fraction(a)
    b_q = to_fraction(b)

    numerators: Dict[Fraction, List[Fraction]] = defaultdict(list)
    denominators: Dict[Fraction, List[Fraction]] = defaultdict(list)
    for i in range(n):
        for side, value in ((numerators, a_q - Fraction(i, 2)), (denominators, b_q - Fraction(i, 2))):
            if _is_pole(value):
                raise PoleError(f"Gamma has a pole at {value}")
            side[value - math.floor(value)].append(value)

    ratio = Fraction(1)
    for residue in sorted(set(numerators) | set(denominators)):
        tops = sorted(numerators.get(residue, []))
        bottoms = sorted(denominators.get(residue, []))
        if len(tops) != len(bottoms):
            raise NonRationalRatioError(
                f"Gamma_{n}({a_q})/Gamma_{n}({b_q}) is not rational: "
                f"unpaired factors in residue class {residue} mod 1"
            )
        for top, bottom in zip(tops, bottoms):
            ratio *= _pochhammer_ratio(top, bottom)
    return ratio


def _bernoulli_L(m: int, chi: DirichletCharacter) -> Fraction:
    """L(1 - m, chi) = -B_{m,chi}/m for a real character."""
    f = chi.modulus
    total = Fraction(0)
    for a in range(1, f + 1):
        value = chi.exact_value(a)
        if value:
            bernoulli = sympy.bernoulli(m, sympy.Rational(a, f))
            total += value * to_fraction(bernoulli)
    generalized = Fraction(f) ** (m - 1) * total
    return -generalized / m


def dirichlet_L(s: Any, chi: DirichletCharacter, *, precision: int | None = None):
    """L(s, chi) for the character viewed modulo its stored modulus.

    Non-positive integer ``s`` with a real character returns an exact
    Fraction through generalized Bernoulli numbers; everything else goes
    through the Hurwitz zeta decomposition.
    """
    s_exact = _as_exact(s)
    if s_exact == 1 and chi.is_principal:
        raise PoleError(f"L(s, chi) has a pole at s=1 for the principal character mod {chi.modulus}")
    if s_exact is not None and is_integral(s_exact) and s_exact <= 0 and chi.is_real:
        value = _bernoulli_L(1 - int(s_exact), chi)
        logger.debug("L(%s, chi mod %d) = %s via Bernoulli", s_exact, chi.modulus, value)
        return value

    f = chi.modulus
    with mp.workprec(resolve_precision(precision)):
        z = fraction_to_mpf(s_exact) if s_exact is not None else mp.mpmathify(s)
        if z == 1:
            if chi.is_principal:
                raise PoleError("L(s, chi) has a pole at s=1 for the principal character")
            total = mp.mpf(0)
            for a in range(1, f + 1):
                value = chi.numeric_value(a)
                if value:
                    total += value * mp.digamma(mp.mpf(a) / f)
            return +(-total / f)
        total = mp.mpf(0)
        for a in range(1, f + 1):
            value = chi.numeric_value(a)
            if value:
                total += value * mp.zeta(z, mp.mpf(a) / f)
        return +(mp.power(f, -z) * total)


def dirichlet_L_depleted(s: Any, chi: DirichletCharacter, c: int, *, precision: int | None = None):
    """``L(s, chi) * prod_{q | c} (1 - chi(q) q^{-s})``."""
    if c < 1:
        raise ValueError(f"level must be a positive integer, got {c}")
    base = dirichlet_L(s, chi, precision=precision)
    primes = sorted(sympy.factorint(c))
    if isinstance(base, Fraction):
        s_int = int(to_fraction(s))
        result = base
        for q in primes:
            result *= 1 - chi.exact_value(q) * Fraction(q) ** (-s_int)
        return result

    with mp.workprec(resolve_precision(precision)):
        s_exact = _as_exact(s)
        z = fraction_to_mpf(s_exact) if s_exact is not None else mp.mpmathify(s)
        result = base
        for q in primes:
            result *= 1 - chi.numeric_value(q) * mp.power(q, -z)
        return +result
