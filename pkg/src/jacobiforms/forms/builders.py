"""Exact q-expansions used to build corpus forms.

Elliptic Eisenstein series, powers of eta, the odd Jacobi theta function and
the weight-10 index-1 cusp form, plus products of these with Jacobi
expansions.  Everything is exact and truncated at a q-exponent cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping, Tuple

import sympy

from ..numth.exact import to_fraction
from .expansion import Index, JacobiExpansion
from .index import IndexMatrix


@dataclass(frozen=True)
class QSeries:
    """``sum a(e) q^e`` over rational exponents ``0 <= e <= cap``."""

    coefficients: Mapping[Fraction, Fraction]
    cap: Fraction
    weight: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cap", to_fraction(self.cap))
        object.__setattr__(self, "weight", to_fraction(self.weight))
        terms = {}
        for e, c in self.coefficients.items():
            e, c = to_fraction(e), to_fraction(c)
            if e < 0:
                raise ValueError(f"negative q-exponent {e}")
            if c and e <= self.cap:
                terms[e] = c
        object.__setattr__(self, "coefficients", dict(sorted(terms.items())))

    def __getitem__(self, exponent: Any) -> Fraction:
        return self.coefficients.get(to_fraction(exponent), Fraction(0))

    def __mul__(self, other: "QSeries") -> "QSeries":
        cap = min(self.cap, other.cap)
        out: Dict[Fraction, Fraction] = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                if e1 + e2 <= cap:
                    out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return QSeries(out, cap, self.weight + other.weight)

    def __add__(self, other: "QSeries") -> "QSeries":
        if self.weight != other.weight:
            raise ValueError("cannot add q-series of different weights")
        out = dict(self.coefficients)
        for e, c in other.coefficients.items():
            out[e] = out.get(e, Fraction(0)) + c
        return QSeries(out, min(self.cap, other.cap), self.weight)

    def scaled(self, factor: Any) -> "QSeries":
        factor = to_fraction(factor)
        return QSeries({e: factor * c for e, c in self.coefficients.items()}, self.cap, self.weight)


def eisenstein_series(k: int, cap: Any) -> QSeries:
    """``E_k = 1 - (2k/B_k) sum sigma_{k-1}(m) q^m`` for even ``k >= 2``."""
    if k < 2 or k % 2:
        raise ValueError(f"Eisenstein series need even weight >= 2, got {k}")
    cap = to_fraction(cap)
    factor = -Fraction(2 * k) / to_fraction(sympy.bernoulli(k))
    coefficients = {Fraction(0): Fraction(1)}
    for m in range(1, int(cap) + 1):
        coefficients[Fraction(m)] = factor * int(sympy.divisor_sigma(m, k - 1))
    return QSeries(coefficients, cap, k)


def _euler_product(cap: int) -> Dict[int, int]:
    """``prod (1 - q^m)`` via the pentagonal number theorem."""
    out: Dict[int, int] = {}
    j = 0
    while True:
        hit = False
        for s in ((j,) if j == 0 else (j, -j)):
            e = s * (3 * s - 1) // 2
            if e <= cap:
                out[e] = (-1) ** (abs(s) % 2)
                hit = True
        if not hit:
            return out
        j += 1


def eta_power(power: int, cap: Any) -> QSeries:
    """``eta^power = q^{power/24} prod (1 - q^m)^power``."""
    cap = to_fraction(cap)
    offset = Fraction(power, 24)
    if cap < offset:
        return QSeries({}, cap, Fraction(power, 2))
    depth = int(cap - offset)
    base = _euler_product(depth)
    result: Dict[int, int] = {0: 1}
    for _ in range(power):
        nxt: Dict[int, int] = {}
        for e1, c1 in result.items():
            for e2, c2 in base.items():
                if e1 + e2 <= depth:
                    nxt[e1 + e2] = nxt.get(e1 + e2, 0) + c1 * c2
        result = nxt
    return QSeries({offset + e: c for e, c in result.items()}, cap, Fraction(power, 2))


def discriminant_series(cap: Any) -> QSeries:
    return eta_power(24, cap)


def odd_theta(cap: Any) -> Dict[Tuple[Fraction, Fraction], int]:
    """``sum (-1)^m q^{(2m+1)^2/8} zeta^{(2m+1)/2}`` as ``{(q-exp, zeta-exp): c}``."""
    cap = to_fraction(cap)
    out = {}
    m = 0
    while Fraction((2 * m + 1) ** 2, 8) <= cap:
        for j in (m, -m - 1):
            out[(Fraction((2 * j + 1) ** 2, 8), Fraction(2 * j + 1, 2))] = (-1) ** (j % 2)
        m += 1
    return out


def phi10(cap: Any = 6) -> JacobiExpansion:
    """The weight-10 index-1 cusp form ``eta^18 * odd_theta^2``.

    Leading term ``q (zeta - 2 + zeta^{-1})``.
    """
    cap = to_fraction(cap)
    theta = odd_theta(cap)
    square: Dict[Tuple[Fraction, Fraction], int] = {}
    for (e1, z1), c1 in theta.items():
        for (e2, z2), c2 in theta.items():
            if e1 + e2 <= cap:
                key = (e1 + e2, z1 + z2)
                square[key] = square.get(key, 0) + c1 * c2
    eta = eta_power(18, cap)
    coefficients: Dict[Index, Fraction] = {}
    for e, a in eta.coefficients.items():
        for (e2, z), c in square.items():
            t = e + e2
            if t <= cap and c:
                key = (((t,),), ((z,),))
                coefficients[key] = coefficients.get(key, Fraction(0)) + a * c
    return JacobiExpansion(
        n=1,
        k=10,
        S=IndexMatrix.of(1),
        coefficients=coefficients,
        cap=cap,
        cuspidal=True,
        label="phi10",
    )


def times(g: QSeries, f: JacobiExpansion, *, label: str = "") -> JacobiExpansion:
    """Product of an elliptic q-series with a degree-one Jacobi expansion."""
    if f.n != 1:
        raise ValueError("q-series products are defined in degree one")
    cap = min(g.cap, f.cap)
    out: Dict[Index, Fraction] = {}
    for (t, r), c in f.items():
        for e, a in g.coefficients.items():
            total = t[0][0] + f.lambda_level * e
            if total <= cap:
                key = (((total,),), r)
                out[key] = out.get(key, Fraction(0)) + a * c
    return JacobiExpansion(
        n=1,
        k=f.k + g.weight,
        S=f.S,
        coefficients=out,
        cap=cap,
        lambda_level=f.lambda_level,
        cuspidal=f.cuspidal,
        level=f.level,
        label=label,
    )


def e2star_times(f: JacobiExpansion, *, label: str = ""):
    """Nearly holomorphic ``E2* f`` with ``E2* = E2 - 3/(pi y)``.

    In the variable ``u = (pi y / lambda)^{-1}`` the coefficient at ``(t,r)``
    is ``c_{E2 f}(t,r) - (3/lambda) u c_f(t,r)``.
    """
    from ..projection.hol import NearlyHolExpansion
    from ..projection.polynomials import SymPoly

    holomorphic = times(eisenstein_series(2, f.cap), f)
    shift = SymPoly.variable(1, 0, 0).scaled(Fraction(-3, f.lambda_level))
    coefficients = {key: SymPoly.constant(1, value) for key, value in holomorphic.items()}
    for key, value in f.items():
        term = shift.scaled(value)
        coefficients[key] = coefficients[key] + term if key in coefficients else term
    return NearlyHolExpansion(
        n=1,
        k=holomorphic.k,
        S=f.S,
        coefficients=coefficients,
        cap=holomorphic.cap,
        lambda_level=f.lambda_level,
        label=label,
    )
