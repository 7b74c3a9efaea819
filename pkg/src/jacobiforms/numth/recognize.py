"""Rational reconstruction of high-precision numbers."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterator

from mpmath import mp

from ..config import resolve_precision
from .exact import fraction_to_mpf, mpf_to_fraction, to_fraction


def convergents(value: Fraction) -> Iterator[Fraction]:
    """Continued-fraction convergents of an exact rational."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    numerator, denominator = value.numerator, value.denominator
    while denominator:
        a, remainder = divmod(numerator, denominator)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield Fraction(p, q)
        numerator, denominator = denominator, remainder


def height(value: Fraction) -> int:
    return max(abs(value.numerator), value.denominator)


def rational_recognize(
    x: Any,
    max_height: int,
    *,
    tolerance: Any = None,
    precision: int | None = None,
) -> Fraction | None:
    """Return the convergent ``p/q`` of ``x`` with ``|x - p/q| < tolerance / q**2``.

    The default tolerance is ``2**(-precision/2)``. Values with a
    non-negligible imaginary part, or with no acceptable convergent of
    height at most ``max_height``, give ``None``.
    """
    if max_height < 1:
        raise ValueError("max_height must be positive")
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        tol = mp.ldexp(1, -(bits // 2)) if tolerance is None else mp.mpf(tolerance)
        if isinstance(x, (int, Fraction)):
            target = to_fraction(x)
        else:
            z = mp.mpmathify(x)
            if abs(z.imag) > tol:
                return None
            real = mp.mpf(z.real)
            if not mp.isfinite(real):
                return None
            target = mpf_to_fraction(real)

        for candidate in convergents(target):
            if height(candidate) > max_height:
                break
            error = abs(target - candidate)
            bound = mpf_to_fraction(tol) / candidate.denominator ** 2
            if error < bound or error == 0:
                return candidate
    return None


def recognition_report(x: Any, max_height: int, *, tolerance: Any = None, precision: int | None = None) -> dict:
    """Candidate, its height and residual in a JSON-friendly dict."""
    candidate = rational_recognize(x, max_height, tolerance=tolerance, precision=precision)
    with mp.workprec(resolve_precision(precision)):
        value = fraction_to_mpf(x) if isinstance(x, (int, Fraction)) else mp.mpmathify(x)
        report = {"value": mp.nstr(value, 30)}
        if candidate is None:
            report.update({"candidate": None, "height": None, "residual": None, "digits": None})
            return report
        residual = abs(value - fraction_to_mpf(candidate))
    report.update(
        {
            "candidate": str(candidate),
            "height": height(candidate),
            "residual": mp.nstr(residual, 5),
            "digits": None if residual == 0 else int(-math.floor(float(mp.log10(residual)))),
        }
    )
    return report
