"""Holomorphic projection of nearly holomorphic Jacobi forms.

A nearly holomorphic expansion has coefficients ``p_{t,r}(u)``, polynomials
in the entries of ``u = (pi y / lambda)^{-1}``.  Its projection onto cusp
forms of weight ``k`` has coefficients

    Gamma_n(a - D) / Gamma_n(a) * det(h)^a * [R(-D_y) det(y)^{-a + D}](h)

with ``a = k - (n + l + 1)/2``, ``h = 4t - lambda S^{-1}[r]`` and
``R(y) = det(y)^D p(y^{-1})``.  Expansions given in det-form,
``det(Y)^{-m} Q(Y)`` with ``Y = pi y / lambda``, use ``Q(-D_y)`` directly and
only shift the Gamma factor by ``m``.

The coefficient display integrates against ``exp(-pi tr((4t/lambda - S^{-1}[r]) y))``
(the exponent ``2t/lambda`` of the first display absorbs the ``e^{-2 pi t y}``
carried by the coefficient function).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, Mapping, Tuple

from mpmath import mp

from ..config import default_tolerance, resolve_precision
from ..errors import ConvergenceError, DomainError, NonPositiveError, WeightBoundError
from ..forms import linalg
from ..forms.expansion import Index, JacobiExpansion, discriminant_matrix, format_index, index_key
from ..forms.index import IndexMatrix
from ..numth.exact import format_fraction, fraction_to_mpf, to_fraction
from ..numth.special import gamma_n_ratio
from .matrix_diff import matrix_diff_apply
from .polynomials import SymPoly, det_form_to_general, inverse_substitution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NearlyHolExpansion:
    """Nearly holomorphic Fourier expansion ``sum p_{t,r} e(tr(t tau)/lambda + tr(r^T w))``.

    In det-form (``det_form=True``) the stored polynomials are ``Q_{t,r}`` in
    the entries of ``Y`` and the series carries ``det(Y)^{-det_exponent}``.
    """

    n: int
    k: Fraction
    S: IndexMatrix
    coefficients: Mapping[Index, SymPoly]
    cap: Fraction
    lambda_level: int = 1
    degree_bound: int | None = None
    det_form: bool = False
    det_exponent: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", to_fraction(self.k))
        object.__setattr__(self, "cap", to_fraction(self.cap))
        object.__setattr__(self, "S", IndexMatrix.of(self.S))
        if self.det_exponent < 0:
            raise ValueError("det exponent must be non-negative")
        cleaned: Dict[Index, SymPoly] = {}
        for (t, r), p in self.coefficients.items():
            key = index_key(t, r, n=self.n, l=self.S.l)
            if not linalg.is_symmetric(key[0]) or not linalg.is_integral(key[1]):
                raise ValueError(f"bad index {format_index(key)}")
            if linalg.trace(key[0]) > self.cap:
                raise ValueError(f"index {format_index(key)} exceeds the trace cap {self.cap}")
            if p.n != self.n:
                raise ValueError(f"coefficient at {format_index(key)} is a polynomial in {p.n}x{p.n} symbols")
            if self.det_form and p.degree > self.det_exponent:
                raise ValueError(f"det-form polynomial at {format_index(key)} has degree above {self.det_exponent}")
            if not p.is_zero:
                cleaned[key] = p
        object.__setattr__(self, "coefficients", dict(sorted(cleaned.items(), key=lambda item: (linalg.trace(item[0][0]), item[0]))))
        actual = self.n * self.det_exponent if self.det_form else max((p.degree for p in cleaned.values()), default=0)
        if self.degree_bound is None:
            object.__setattr__(self, "degree_bound", actual)
        elif self.degree_bound < actual:
            raise ValueError(f"degree bound {self.degree_bound} is below the actual degree {actual}")

    @classmethod
    def from_holomorphic(cls, f: JacobiExpansion) -> "NearlyHolExpansion":
        return cls(
            n=f.n,
            k=f.k,
            S=f.S,
            coefficients={key: SymPoly.constant(f.n, value) for key, value in f.items()},
            cap=f.cap,
            lambda_level=f.lambda_level,
            label=f.label,
        )

    @property
    def l(self) -> int:
        return self.S.l

    def items(self) -> Iterator[Tuple[Index, SymPoly]]:
        return iter(self.coefficients.items())

    def __len__(self) -> int:
        return len(self.coefficients)

    def as_general(self) -> "NearlyHolExpansion":
        """Rewrite a det-form expansion with ``p(u) = det(u)^m Q(u^{-1})``."""
        if not self.det_form:
            return self
        m = self.det_exponent
        return NearlyHolExpansion(
            n=self.n,
            k=self.k,
            S=self.S,
            coefficients={key: det_form_to_general(q.renamed("u"), m) for key, q in self.items()},
            cap=self.cap,
            lambda_level=self.lambda_level,
            degree_bound=self.n * m,
            label=self.label,
        )

    def as_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "l": self.l,
            "k": format_fraction(self.k),
            "S": linalg.format_matrix(self.S.rows),
            "lambda": self.lambda_level,
            "cap": format_fraction(self.cap),
            "D": self.degree_bound,
            "det_form": self.det_form,
            "m": self.det_exponent,
            "coefficients": [
                {"t": linalg.format_matrix(t), "r": linalg.format_matrix(r), "p": p.format()}
                for (t, r), p in self.items()
            ],
        }


def holomorphic_weight_offset(n: int, l: int) -> Fraction:
    """``(n + l + 1)/2``."""
    return Fraction(n + l + 1, 2)


def check_weight(k: Any, n: int, l: int, shift: int) -> None:
    """Require ``k > max(n + l/2 + shift, 2n + l)``."""
    k = to_fraction(k)
    bound = max(n + Fraction(l, 2) + shift, Fraction(2 * n + l))
    if k <= bound:
        raise WeightBoundError(f"weight {k} must exceed {format_fraction(bound)} (n={n}, l={l}, shift={shift})")


def hol_coefficient(p: SymPoly, *, k: Any, l: int, h: Any, D: int | None = None) -> Fraction:
    """Projected coefficient for one nearly holomorphic coefficient ``p``.

    ``D`` defaults to the degree of ``p``; the value does not depend on the
    choice of bound as long as ``D >= deg p``.
    """
    n = p.n
    D = p.degree if D is None else D
    a = to_fraction(k) - holomorphic_weight_offset(n, l)
    R = inverse_substitution(p, D, prefix="d")
    value = matrix_diff_apply(R.signed(), -a + D, h)
    return gamma_n_ratio(n, a - D, a) * value.relative(-a)


def hol_coefficient_det_form(q: SymPoly, *, m: int, k: Any, l: int, h: Any) -> Fraction:
    """Projected coefficient for one det-form coefficient ``det(Y)^{-m} Q(Y)``."""
    n = q.n
    a = to_fraction(k) - holomorphic_weight_offset(n, l)
    value = matrix_diff_apply(q.renamed("d").signed(), -a + m, h)
    return gamma_n_ratio(n, a - m, a) * value.relative(-a)


def _project(
    f: NearlyHolExpansion,
    coefficient: Callable[[SymPoly, linalg.Matrix], Fraction],
    strict: bool,
) -> JacobiExpansion:
    out: Dict[Index, Fraction] = {}
    dropped = 0
    for (t, r), p in f.items():
        h = discriminant_matrix(f.S, t, r, f.lambda_level)
        if not linalg.is_positive_definite(h) or not linalg.is_positive_definite(t):
            if strict:
                raise NonPositiveError(f"4t - lambda S^-1[r] is not positive definite at {format_index((t, r))}")
            dropped += 1
            continue
        out[(t, r)] = coefficient(p, h)
    if dropped:
        logger.debug("dropped %d indices with non-positive 4t - lambda S^-1[r]", dropped)
    return JacobiExpansion(
        n=f.n,
        k=f.k,
        S=f.S,
        coefficients=out,
        cap=f.cap,
        lambda_level=f.lambda_level,
        cuspidal=True,
        label=f"Hol({f.label})" if f.label else "",
    )


def hol_project(f: NearlyHolExpansion, *, strict: bool = False) -> JacobiExpansion:
    """Holomorphic projection onto cusp forms of weight ``f.k``.

    Det-form expansions are routed through :func:`hol_project_improved`.
    Indices where ``4t - lambda S^{-1}[r]`` is not positive definite carry
    no cusp-form coefficient and are dropped (``strict=True`` raises
    :class:`NonPositiveError` instead).
    """
    if f.det_form:
        return hol_project_improved(f, strict=strict)
    D = f.degree_bound
    check_weight(f.k, f.n, f.l, D)
    logger.debug("projecting %d coefficients, n=%d l=%d k=%s D=%d", len(f), f.n, f.l, f.k, D)
    return _project(f, lambda p, h: hol_coefficient(p, k=f.k, l=f.l, h=h, D=D), strict)


def hol_project_improved(f: NearlyHolExpansion, *, strict: bool = False) -> JacobiExpansion:
    """Projection of a det-form expansion with the Gamma factor shifted by ``m`` only."""
    if not f.det_form:
        raise DomainError("the improved projection needs a det-form expansion")
    m = f.det_exponent
    check_weight(f.k, f.n, f.l, m)
    return _project(f, lambda q, h: hol_coefficient_det_form(q, m=m, k=f.k, l=f.l, h=h), strict)


def coefficient_function(p: SymPoly, t: Any, lambda_level: int = 1) -> Callable[[Any], Any]:
    """``A(y) = p(lambda/(pi y)) e^{-2 pi t y / lambda}`` in degree one."""
    if p.n != 1:
        raise DomainError("coefficient functions are scalar")
    t = fraction_to_mpf(to_fraction(t))
    coefficients = [(mono[0], fraction_to_mpf(c)) for mono, c in p.items()]

    def A(y):
        u = lambda_level / (mp.pi * y)
        return mp.fsum(c * u ** e for e, c in coefficients) * mp.exp(-2 * mp.pi * t * y / lambda_level)

    return A


def coeff_integral_oracle(
    A: Callable[[Any], Any],
    k: Any,
    l: int,
    t: Any,
    r: Any,
    *,
    S: Any = 1,
    lambda_level: int = 1,
    precision: int | None = None,
    normalized: bool = False,
):
    """``int_0^inf A(y) exp(-pi (2t/lambda - S^{-1}[r]) y) y^{k - l/2 - 2} dy`` by quadrature.

    With ``normalized=True`` the integral is multiplied by
    ``Gamma(a)^{-1} (pi/lambda)^a h^a`` so that it is directly comparable
    with :func:`hol_coefficient` (``a = k - l/2 - 1``, ``h = 4t - lambda S^{-1}[r]``).
    """
    S = IndexMatrix.of(S)
    k = to_fraction(k)
    t_m, r_m = index_key(t, r, n=1, l=S.l)
    h = discriminant_matrix(S, t_m, r_m, lambda_level)[0][0]
    if h <= 0:
        raise NonPositiveError(f"integrand does not decay: 4t - lambda S^-1[r] = {h}")
    rate = 2 * t_m[0][0] / lambda_level - S.inverse_form(r_m)[0][0]
    power = k - Fraction(l, 2) - 2
    with mp.workprec(resolve_precision(precision)):
        rate_f = fraction_to_mpf(rate)
        power_f = fraction_to_mpf(power)

        def integrand(y):
            return A(y) * mp.exp(-mp.pi * rate_f * y) * mp.power(y, power_f)

        value, error = mp.quad(integrand, [0, 1, mp.inf], error=True)
        if not mp.isfinite(value):
            raise ConvergenceError("quadrature did not converge")
        if error > default_tolerance() * max(abs(value), mp.mpf(1)):
            logger.warning("quadrature error estimate %s exceeds tolerance", mp.nstr(error, 5))
        if normalized:
            a = fraction_to_mpf(power + 1)
            h_f = fraction_to_mpf(h)
            value = value * mp.power(mp.pi / lambda_level, a) * mp.power(h_f, a) / mp.gamma(a)
        return value
