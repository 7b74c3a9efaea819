"""Standard L-function of a Jacobi eigenform over Q.

Ideals are positive integers, ``N(a) = a`` and ``chi*(a) = chi(a)``.  An
:class:`LSeriesSpec` carries eigenvalues ``lambda(a)`` and/or Satake data;
from it we build the Dirichlet series ``D(s)``, the correction factor
``frak-L(chi, s)``, the Euler product ``L(s, f, chi)`` and every constant that
enters the normalized special value.

Local Euler data is homogeneous in ``X = chi(p) p^{-s}``, so eigenvalues
generated from Satake data never depend on the character.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import sympy
from mpmath import mp

from .config import default_cutoff, resolve_precision
from .errors import DomainError, PoleError, VanishingFactorError, WindowError
from .forms.index import IndexMatrix
from .numth.characters import DirichletCharacter, QuadCharacterPsiS, psi_S
from .numth.exact import ExactProduct, format_fraction, fraction_to_mpf, to_fraction
from .numth.recognize import recognition_report
from .numth.special import dirichlet_L_depleted, gamma_n_ratio

logger = logging.getLogger(__name__)

DEFAULT_MAX_HEIGHT = 10 ** 6

Polynomial = Tuple[Any, ...]


@dataclass(frozen=True)
class SatakeValue:
    """Exact Satake parameter ``modulus * exp(2 pi i angle)``."""

    modulus: Fraction
    angle: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.modulus <= 0:
            raise ValueError(f"Satake parameters must be nonzero, got modulus {self.modulus}")
        if not 0 <= self.angle < 1:
            raise ValueError(f"angle must lie in [0, 1), got {self.angle}")

    @classmethod
    def of(cls, value: Any) -> "SatakeValue":
        if isinstance(value, SatakeValue):
            return value
        if isinstance(value, str) and "@" in value:
            modulus, angle = value.split("@", 1)
            return cls(to_fraction(modulus), to_fraction(angle) % 1)
        q = to_fraction(value)
        if q < 0:
            return cls(-q, Fraction(1, 2))
        return cls(q)

    @classmethod
    def unit(cls, angle: Any) -> "SatakeValue":
        return cls(Fraction(1), to_fraction(angle) % 1)

    def numeric(self):
        value = fraction_to_mpf(self.modulus)
        if self.angle == 0:
            return value
        if self.angle == Fraction(1, 2):
            return -value
        return value * mp.expjpi(2 * fraction_to_mpf(self.angle))

    def format(self) -> str:
        if self.angle == 0:
            return format_fraction(self.modulus)
        return f"{format_fraction(self.modulus)}@{format_fraction(self.angle)}"


def _poly_mul(a: Sequence[Any], b: Sequence[Any]) -> List[Any]:
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_eval(coefficients: Sequence[Any], x) -> Any:
    total = mp.mpf(0)
    for c in reversed(coefficients):
        total = total * x + c
    return total


def _series_quotient(numerator: Sequence[Any], denominator: Sequence[Any], terms: int) -> List[Any]:
    """First ``terms`` power-series coefficients of ``numerator / denominator``.

    ``denominator[0]`` must be 1.
    """
    out: List[Any] = []
    for j in range(terms):
        value = numerator[j] if j < len(numerator) else mp.mpf(0)
        for i in range(1, min(j, len(denominator) - 1) + 1):
            value -= denominator[i] * out[j - i]
        out.append(value)
    return out


def _cauchy_radius(coefficients: Sequence[Any]) -> Any:
    """Upper bound for the reciprocal roots of ``1 + a_1 X + ... + a_d X^d``."""
    if len(coefficients) <= 1:
        return mp.mpf(1)
    return 1 + max(abs(_as_number(c)) for c in coefficients[1:])


def _check_constant_term(coefficients: Sequence[Any], what: str) -> None:
    if not coefficients or _as_number(coefficients[0]) != 1:
        raise ValueError(f"{what} must have constant term 1")


@dataclass(frozen=True)
class EulerFactorTable:
    """Local factors ``L_p(X)`` for the primes covered by the data.

    Each prime carries either Satake parameters or the coefficient list of
    ``L_p(X)``; primes dividing ``level`` always have ``L_p = 1``.
    """

    n: int
    level: int = 1
    satake: Mapping[int, Tuple[SatakeValue, ...]] = field(default_factory=dict)
    polynomials: Mapping[int, Polynomial] = field(default_factory=dict)

    def __post_init__(self) -> None:
        overlap = set(self.satake) & set(self.polynomials)
        if overlap:
            raise ValueError(f"primes {sorted(overlap)} carry both Satake data and a polynomial")
        for p, values in self.satake.items():
            if not sympy.isprime(p):
                raise ValueError(f"{p} is not a prime")
            if self.level % p and len(values) != self.n:
                raise ValueError(f"p={p}: expected {self.n} Satake parameters, got {len(values)}")
        for p, coefficients in self.polynomials.items():
            if not sympy.isprime(p):
                raise ValueError(f"{p} is not a prime")
            if self.level % p == 0:
                continue
            if len(coefficients) != 2 * self.n + 1:
                raise ValueError(f"p={p}: L_p must have degree {2 * self.n}, got {len(coefficients) - 1}")
            _check_constant_term(coefficients, f"L_{p}(X)")
            for j in range(self.n + 1):
                if coefficients[j] != coefficients[2 * self.n - j]:
                    raise ValueError(f"p={p}: L_p(X) is not self-dual at X^{j}")

    @classmethod
    def from_satake(cls, n: int, data: Mapping[int, Sequence[Any]], *, level: int = 1) -> "EulerFactorTable":
        return cls(n, level, {int(p): tuple(SatakeValue.of(mu) for mu in values) for p, values in data.items()})

    @property
    def primes(self) -> List[int]:
        return sorted(set(self.satake) | set(self.polynomials))

    @property
    def coverage(self) -> int:
        """Largest ``N`` with every prime ``p <= N`` present (or dividing the level)."""
        covered = set(self.primes)
        p = 2
        while p in covered or self.level % p == 0:
            p = int(sympy.nextprime(p))
        return p - 1

    def polynomial(self, p: int) -> List[Any]:
        """Coefficients of ``L_p(X)`` as mpmath numbers."""
        if self.level % p == 0:
            return [mp.mpf(1)]
        if p in self.polynomials:
            return [_as_number(c) for c in self.polynomials[p]]
        if p not in self.satake:
            raise KeyError(f"no Euler factor stored for p={p}")
        out: List[Any] = [mp.mpf(1)]
        for mu in self.satake[p]:
            value = mu.numeric()
            out = _poly_mul(out, [mp.mpf(1), -(value + 1 / value), mp.mpf(1)])
        return out

    def radius(self, p: int):
        """Bound ``M`` for the reciprocal roots of ``L_p`` (at least 1)."""
        if self.level % p == 0:
            return mp.mpf(1)
        if p in self.satake:
            moduli = [fraction_to_mpf(mu.modulus) for mu in self.satake[p]]
            return max([mp.mpf(1)] + moduli + [1 / m for m in moduli])
        return _cauchy_radius(self.polynomial(p))

    def as_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "level": self.level,
            "satake": {str(p): [mu.format() for mu in values] for p, values in sorted(self.satake.items())},
            "polynomials": {str(p): [str(c) for c in coeffs] for p, coeffs in sorted(self.polynomials.items())},
        }


@dataclass(frozen=True)
class LSeriesSpec:
    """Everything needed to assemble ``L(s, f, chi)`` for one eigenform.

    ``g_table`` maps a prime to ``(numerator, denominator)`` coefficient lists
    of ``G_p`` in ``X = chi(p) p^{-s}``; absent primes have ``G_p = 1``.
    """

    n: int
    k: Fraction
    l: int
    level: int = 1
    chi: DirichletCharacter = field(default_factory=DirichletCharacter.principal)
    psi: QuadCharacterPsiS | None = None
    eigenvalues: Mapping[int, Any] = field(default_factory=dict)
    euler: EulerFactorTable | None = None
    g_table: Mapping[int, Tuple[Polynomial, Polynomial]] = field(default_factory=dict)
    label: str = ""
    index: IndexMatrix | None = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.l < 1:
            raise ValueError(f"degree and index size must be positive, got n={self.n}, l={self.l}")
        if self.level < 1:
            raise ValueError(f"level must be a positive integer, got {self.level}")
        if self.index is not None and self.index.l != self.l:
            raise ValueError(f"index matrix is {self.index.l}x{self.index.l}, spec has l={self.l}")
        if self.psi is not None and self.psi.l != self.l:
            raise ValueError(f"psi_S belongs to l={self.psi.l}, spec has l={self.l}")
        if self.euler is not None and (self.euler.n != self.n or self.euler.level != self.level):
            raise ValueError("Euler factor table disagrees with the series' degree or level")
        for a in self.eigenvalues:
            if int(a) < 1:
                raise ValueError(f"eigenvalues are indexed by positive integers, got {a}")
        for p, (numerator, denominator) in self.g_table.items():
            _check_constant_term(numerator, f"G_{p} numerator")
            _check_constant_term(denominator, f"G_{p} denominator")

    @classmethod
    def build(
        cls,
        n: int,
        k: Any,
        S: Any,
        *,
        chi: DirichletCharacter | None = None,
        level: int = 1,
        eigenvalues: Mapping[int, Any] | None = None,
        satake: Mapping[int, Sequence[Any]] | None = None,
        g_table: Mapping[int, Tuple[Polynomial, Polynomial]] | None = None,
        label: str = "",
    ) -> "LSeriesSpec":
        index = IndexMatrix.of(S)
        euler = EulerFactorTable.from_satake(n, satake, level=level) if satake is not None else None
        return cls(
            n=n,
            k=to_fraction(k),
            l=index.l,
            level=level,
            chi=chi or DirichletCharacter.principal(1),
            psi=psi_S(index),
            eigenvalues=dict(eigenvalues or {}),
            euler=euler,
            g_table=dict(g_table or {}),
            label=label,
            index=index,
        )

    @property
    def half_l(self) -> Fraction:
        return Fraction(self.l, 2)

    @property
    def chi_psi(self) -> DirichletCharacter:
        if self.psi is None:
            raise DomainError("no psi_S attached; build the series from an index matrix")
        return self.chi * self.psi.character

    def eigenvalue_coverage(self, cutoff: int) -> int:
        """Largest ``M <= cutoff`` with ``lambda(1..M)`` all stored."""
        for a in range(1, cutoff + 1):
            if a not in self.eigenvalues:
                return a - 1
        return cutoff

    def with_eigenvalues(self, eigenvalues: Mapping[int, Any]) -> "LSeriesSpec":
        return LSeriesSpec(
            n=self.n,
            k=self.k,
            l=self.l,
            level=self.level,
            chi=self.chi,
            psi=self.psi,
            eigenvalues=dict(eigenvalues),
            euler=self.euler,
            g_table=self.g_table,
            label=self.label,
            index=self.index,
        )


@dataclass(frozen=True)
class PartialSum:
    """Truncated Dirichlet series together with a bound for what was dropped."""

    value: Any
    cutoff: int
    tail_bound: Any
    tail_method: str

    def as_record(self) -> Dict[str, Any]:
        return {
            "value": mp.nstr(self.value, 30),
            "cutoff": self.cutoff,
            "tail_bound": mp.nstr(self.tail_bound, 5),
            "tail_method": self.tail_method,
        }


def _check_range(value, bound, what: str, override: bool) -> None:
    if mp.re(value) > bound:
        return
    message = f"{what}: Re(s)={mp.nstr(mp.re(value), 10)} is outside the convergence range Re(s) > {mp.nstr(bound, 10)}"
    if not override:
        raise WindowError(message)
    logger.warning("%s; continuing because the range check was overridden", message)


def _as_number(s: Any):
    if isinstance(s, (int, Fraction, str)):
        return fraction_to_mpf(to_fraction(s))
    return mp.mpmathify(s)


def _resolve_cutoff(cutoff: int | None) -> int:
    value = default_cutoff() if cutoff is None else int(cutoff)
    if value < 1:
        raise ValueError(f"cutoff must be >= 1, got {value}")
    return value


def _odd_shift(l: int) -> int:
    return l % 2


def _frak_local_coefficients(spec: LSeriesSpec, p: int) -> List[Fraction]:
    """``c_i = p^{-(2n - 2i + [l odd])}``; the local factor is ``prod(1 - c_i X^2)``."""
    return [Fraction(1, p ** (2 * spec.n - 2 * i + _odd_shift(spec.l))) for i in range(1, spec.n + 1)]


def _g_polynomials(spec: LSeriesSpec, p: int) -> Tuple[List[Any], List[Any]]:
    if p not in spec.g_table:
        return [mp.mpf(1)], [mp.mpf(1)]
    numerator, denominator = spec.g_table[p]
    return [_as_number(c) for c in numerator], [_as_number(c) for c in denominator]


def _tail_bound(theta, sigma, cutoff: int, scale=1):
    """``scale * sum_{a > N} a^{theta - sigma} <= scale * N^{theta - sigma + 1}/(sigma - theta - 1)``."""
    gap = sigma - theta - 1
    if gap <= 0:
        return mp.inf
    return scale * mp.power(cutoff, -gap) / gap


def dirichlet_series_D(
    spec: LSeriesSpec,
    s: Any,
    cutoff: int | None = None,
    *,
    override: bool = False,
    precision: int | None = None,
) -> PartialSum:
    """``D(s) = sum_{a <= N} lambda(a) chi(a) a^{-s}`` with a tail bound.

    With Satake data the bound uses ``|b(a)| <= (K M)^{Omega(a)}`` where
    ``lambda(a) = b(a) a^{n+l/2}``, ``K`` counts the linear factors of the
    local denominators and ``M`` bounds their reciprocal roots.  Without
    Satake data the growth exponent is read off the stored eigenvalues.
    """
    N = _resolve_cutoff(cutoff)
    with mp.workprec(resolve_precision(precision)):
        z = _as_number(s)
        _check_range(z, 2 * spec.n + spec.l + 1, "D(s)", override)
        covered = spec.eigenvalue_coverage(N)
        if covered < N:
            logger.warning("eigenvalues stored only up to %d; truncating D(s) there instead of %d", covered, N)
        total = mp.mpf(0)
        for a in range(1, covered + 1):
            value = spec.eigenvalues[a]
            if value == 0:
                continue
            character = spec.chi.numeric_value(a)
            if character == 0:
                continue
            total += _as_number(value) * character * mp.power(a, -z)

        sigma = mp.re(z)
        if covered < 1:
            return PartialSum(mp.mpf(0), 0, mp.inf, "empty")
        if spec.euler is not None:
            primes = [p for p in spec.euler.primes if p <= covered]
            M = max([mp.mpf(1)] + [spec.euler.radius(p) for p in primes])
            K = 4 * spec.n
            scale = mp.mpf(1)
            for p in spec.g_table:
                numerator, denominator = _g_polynomials(spec, p)
                K += len(numerator) - 1
                M = max(M, _cauchy_radius(numerator))
                scale *= max(mp.mpf(1), sum(abs(c) for c in denominator))
            theta = spec.n + fraction_to_mpf(spec.half_l) + mp.log(K * M, 2)
            tail = _tail_bound(theta, sigma, covered, scale)
            method = "geometric"
        else:
            theta = mp.mpf(0)
            for a in range(2, covered + 1):
                magnitude = abs(_as_number(spec.eigenvalues[a]))
                if magnitude > 0:
                    theta = max(theta, mp.log(magnitude) / mp.log(a))
            tail = _tail_bound(theta, sigma, covered)
            method = "empirical"
        return PartialSum(+total, covered, tail, method)


def frak_L(spec: LSeriesSpec, s: Any, cutoff: int | None = None, *, precision: int | None = None):
    """``prod_{p <= N, p prime to c} G_p * prod_i (1 - chi^2(p) p^{-(2s+2n-2i[+1])})``."""
    N = _resolve_cutoff(cutoff)
    with mp.workprec(resolve_precision(precision)):
        z = _as_number(s)
        product = mp.mpf(1)
        for p in sympy.primerange(2, N + 1):
            if spec.level % p == 0:
                continue
            character = spec.chi.numeric_value(p)
            X = character * mp.power(p, -z)
            factor = mp.mpf(1)
            for c in _frak_local_coefficients(spec, p):
                factor *= 1 - fraction_to_mpf(c) * X * X
            numerator, denominator = _g_polynomials(spec, p)
            bottom = _poly_eval(denominator, X)
            if bottom == 0:
                raise PoleError(f"G_{p} has a pole at s={mp.nstr(z, 10)}")
            product *= factor * _poly_eval(numerator, X) / bottom
        return +product


def _effective_primes(spec: LSeriesSpec, cutoff: int) -> List[int]:
    if spec.euler is None:
        raise DomainError("no Euler factor table attached")
    coverage = spec.euler.coverage
    if coverage < cutoff:
        logger.warning("Euler factors stored only up to p=%d; truncating the product there instead of %d", coverage, cutoff)
    bound = min(cutoff, coverage)
    return list(sympy.primerange(2, bound + 1))


def euler_product_L(
    spec: LSeriesSpec,
    s: Any,
    cutoff: int | None = None,
    *,
    override: bool = False,
    precision: int | None = None,
):
    """``prod_p L_p(chi(p) p^{-s})^{-1}`` over the stored primes up to ``cutoff``."""
    N = _resolve_cutoff(cutoff)
    with mp.workprec(resolve_precision(precision)):
        z = _as_number(s)
        _check_range(z, spec.n + fraction_to_mpf(spec.half_l) + 1, "L(s, f, chi)", override)
        product = mp.mpf(1)
        for p in _effective_primes(spec, N):
            X = spec.chi.numeric_value(p) * mp.power(p, -z)
            factor = _poly_eval(spec.euler.polynomial(p), X)
            if factor == 0:
                raise VanishingFactorError(f"L_{p}(X) vanishes at s={mp.nstr(z, 10)}")
            product /= factor
        return +product


def euler_lower_bound(spec: LSeriesSpec, s: Any, cutoff: int | None = None, *, precision: int | None = None):
    """Lower bound ``prod_p (1 + M_p p^{-Re s})^{-2n}`` for ``|L(s, f, chi)|`` truncated at ``cutoff``."""
    N = _resolve_cutoff(cutoff)
    with mp.workprec(resolve_precision(precision)):
        sigma = mp.re(_as_number(s))
        bound = mp.mpf(1)
        for p in _effective_primes(spec, N):
            if spec.level % p == 0:
                continue
            bound /= mp.power(1 + spec.euler.radius(p) * mp.power(p, -sigma), 2 * spec.n)
        return +bound


def standard_L(spec: LSeriesSpec, s: Any, cutoff: int | None = None, *, override: bool = False, precision: int | None = None):
    """``L(s, f, chi)`` from the Euler table, or as ``frak-L(chi, s) D(s + n + l/2)`` from eigenvalues."""
    if spec.euler is not None:
        return euler_product_L(spec, s, cutoff, override=override, precision=precision)
    with mp.workprec(resolve_precision(precision)):
        z = _as_number(s)
        shifted = z + spec.n + fraction_to_mpf(spec.half_l)
        series = dirichlet_series_D(spec, shifted, cutoff, override=override, precision=precision)
        if series.cutoff == 0:
            raise DomainError("neither Euler factors nor eigenvalues are attached")
        if series.value == 0:
            return mp.mpf(0)
        return +(frak_L(spec, z, cutoff, precision=precision) * series.value)


def eigenvalues_from_satake(
    table: EulerFactorTable,
    n: int,
    l: int,
    cutoff: int,
    G: Mapping[int, Tuple[Polynomial, Polynomial]] | None = None,
    *,
    precision: int | None = None,
) -> Dict[int, Any]:
    """Eigenvalues ``lambda(a)``, ``a <= cutoff``, consistent with the Euler product.

    Expands ``frak-L(chi, s)^{-1} prod_p L_p(p^{-s})^{-1}`` as ``sum b(a) a^{-s}``
    with the character factored out and returns ``lambda(a) = b(a) a^{n+l/2}``.
    """
    if table.n != n:
        raise ValueError(f"table has degree {table.n}, expected {n}")
    if table.coverage < cutoff:
        raise ValueError(f"Euler factors cover primes only up to {table.coverage}, need {cutoff}")
    G = G or {}
    shift = _odd_shift(l)
    with mp.workprec(resolve_precision(precision)):
        local: Dict[int, List[Any]] = {}
        for p in sympy.primerange(2, cutoff + 1):
            terms = int(math.log(cutoff, p)) + 2
            if table.level % p == 0:
                local[p] = [mp.mpf(1)] + [mp.mpf(0)] * terms
                continue
            denominator = table.polynomial(p)
            for i in range(1, n + 1):
                c = Fraction(1, p ** (2 * n - 2 * i + shift))
                denominator = _poly_mul(denominator, [mp.mpf(1), mp.mpf(0), -fraction_to_mpf(c)])
            numerator: List[Any] = [mp.mpf(1)]
            if p in G:
                g_num, g_den = G[p]
                denominator = _poly_mul(denominator, [_as_number(c) for c in g_num])
                numerator = [_as_number(c) for c in g_den]
            local[p] = _series_quotient(numerator, denominator, terms)

        weight = n + Fraction(l, 2)
        eigenvalues: Dict[int, Any] = {}
        for a in range(1, cutoff + 1):
            b = mp.mpf(1)
            for p, exponent in sympy.factorint(a).items():
                b *= local[p][exponent]
            eigenvalues[a] = b * mp.power(a, fraction_to_mpf(weight))
        return eigenvalues


def check_multiplicativity(spec: LSeriesSpec, *, tolerance: float = 1e-20, precision: int | None = None) -> List[Dict[str, Any]]:
    """Coprime pairs ``(a, b)`` with ``lambda(ab) != lambda(a) lambda(b)`` among stored values."""
    failures: List[Dict[str, Any]] = []
    stored = sorted(spec.eigenvalues)
    with mp.workprec(resolve_precision(precision)):
        for i, a in enumerate(stored):
            if a == 1:
                continue
            for b in stored[i:]:
                if b == 1 or math.gcd(a, b) != 1 or a * b not in spec.eigenvalues:
                    continue
                product = _as_number(spec.eigenvalues[a]) * _as_number(spec.eigenvalues[b])
                target = _as_number(spec.eigenvalues[a * b])
                error = abs(product - target)
                if error > tolerance * max(1, abs(target)):
                    failures.append({"a": a, "b": b, "product": mp.nstr(product, 15), "stored": mp.nstr(target, 15)})
    return failures


def lambda_normalizer(
    k: Any,
    l: int,
    n_eis: int,
    level: int,
    chi_psi: DirichletCharacter,
    s: Any,
    *,
    chi_squared: DirichletCharacter | None = None,
    precision: int | None = None,
):
    """Normalizing factor of the degree-``n_eis`` Eisenstein series at ``s - l/4``.

    ``l`` even: ``L_c(2s - l/2, chi psi_S) prod_{i <= n_eis/2} L_c(4s - l - 2i, chi^2)``;
    ``l`` odd: ``prod_{i <= [(n_eis+1)/2]} L_c(4s - l - 2i + 1, chi^2)``.
    ``chi^2`` defaults to the square of ``chi_psi`` (``psi_S^2`` is trivial
    away from the discriminant).  Exact Bernoulli values multiply to a
    Fraction; otherwise the result is an mpmath number.
    """
    k = to_fraction(k)
    if n_eis < 1:
        raise ValueError(f"Eisenstein degree must be positive, got {n_eis}")
    square = chi_squared if chi_squared is not None else chi_psi.square()
    exact = isinstance(s, (int, Fraction, str))

    with mp.workprec(resolve_precision(precision)):
        z = to_fraction(s) if exact else mp.mpmathify(s)
        half = Fraction(l, 2) if exact else mp.mpf(l) / 2
        if l % 2 == 0:
            arguments = [(2 * z - half, chi_psi)]
            arguments += [(4 * z - l - 2 * i, square) for i in range(1, n_eis // 2 + 1)]
        else:
            arguments = [(4 * z - l - 2 * i + 1, square) for i in range(1, (n_eis + 1) // 2 + 1)]

        result: Any = Fraction(1)
        for argument, character in arguments:
            value = dirichlet_L_depleted(argument, character, level, precision=precision)
            logger.debug("weight %s normalizer: L_%d(%s, %s) = %s", k, level, argument, character.label, value)
            if isinstance(result, Fraction) and isinstance(value, Fraction):
                result *= value
                continue
            if isinstance(result, Fraction):
                result = fraction_to_mpf(result)
            result *= fraction_to_mpf(value) if isinstance(value, Fraction) else value
        return result if isinstance(result, Fraction) else +result


def c_Sk(S: Any, k: Any, n: int, sigma: Any = None, *, sigma_shift: Any = None) -> ExactProduct:
    """``+-det(2S)^{-n} 2^{n(n+3)/2 - 4 sigma - nk} pi^{n(n+1)/2} Gamma_n(a - (n+1)/2)/Gamma_n(a)``.

    Here ``a = sigma + k - l/2``.  Pass ``sigma`` directly or ``sigma_shift``
    with ``sigma = k + 2 sigma_shift``.  The sign is not determined, so the
    result carries ``sign_unknown``.
    """
    S = IndexMatrix.of(S)
    k = to_fraction(k)
    if (sigma is None) == (sigma_shift is None):
        raise ValueError("pass exactly one of sigma and sigma_shift")
    sigma = to_fraction(sigma) if sigma is not None else k + 2 * to_fraction(sigma_shift)
    a = sigma + k - Fraction(S.l, 2)
    if sigma < 0 or a <= 2 * n:
        raise DomainError(f"c_S,k needs sigma >= 0 and sigma + k - l/2 > {2 * n}; got sigma={sigma}, k={k}, l={S.l}")
    ratio = gamma_n_ratio(n, a - Fraction(n + 1, 2), a)
    return ExactProduct.build(
        ratio * Fraction(S.det_2s) ** (-n),
        pi_exponent=Fraction(n * (n + 1), 2),
        radicals=[(2, Fraction(n * (n + 3), 2) - 4 * sigma - n * k)],
        sign_unknown=True,
    )


def sigma_window(n: int, k: Any, l: int, sigma: Any) -> Dict[str, Any]:
    """Window ``k/2 - 2n - l/2 > sigma/2 > n + l/2 + 1`` and the parity ``sigma - k`` even."""
    k = to_fraction(k)
    sigma = to_fraction(sigma)
    lower = n + Fraction(l, 2) + 1
    upper = k / 2 - 2 * n - Fraction(l, 2)
    inside = upper > sigma / 2 > lower
    parity = (sigma - k).denominator == 1 and (sigma - k) % 2 == 0
    return {
        "sigma": format_fraction(sigma),
        "lower": format_fraction(lower),
        "upper": format_fraction(upper),
        "inside": inside,
        "parity": parity,
        "admissible": inside and parity,
    }


def property_a_sigma_conditions(n: int, k: Any, l: int, sigma: Any) -> Dict[str, Any]:
    """Conditions on ``sigma`` for the variant of the special-value result that assumes Property A."""
    k = to_fraction(k)
    sigma = to_fraction(sigma)
    half = Fraction(l, 2)
    centre = Fraction(2 * n + 1, 2)
    distance = abs(sigma - half - centre)
    first = 2 * n + 1 - (k - half) <= sigma - half <= k - half
    parity_value = distance + centre - (k - half)
    second = parity_value.denominator == 1 and parity_value % 2 == 0
    third = k > half + n * (1 + k - half - distance - centre)
    return {"i": first, "ii": second, "iii": third, "all": first and second and third}


def exponent_e_sigma(n: int, k: Any, l: int, sigma: Any) -> int:
    """``e_sigma = n(k - l + sigma) - e`` with ``e = n^2 + n - sigma + l/2`` for even ``l``, else ``n^2``."""
    k = to_fraction(k)
    sigma = to_fraction(sigma)
    e = n * n + n - sigma + Fraction(l, 2) if l % 2 == 0 else Fraction(n * n)
    value = n * (k - l + sigma) - e
    if value.denominator != 1:
        raise DomainError(f"e_sigma={value} is not an integer for k={k}, sigma={sigma}")
    return int(value)


def exponent_e_sigma_general(n: int, k: Any, l: int, sigma: Any, d: int = 1) -> int:
    """Exponent over a totally real field of degree ``d`` with parallel weight ``k``."""
    k = to_fraction(k)
    sigma = to_fraction(sigma)
    if l % 2 == 0 and sigma >= 2 * n + Fraction(l, 2):
        e = n * n + n - sigma + Fraction(l, 2)
    else:
        e = Fraction(n * n)
    value = n * d * (k - l + sigma) - d * e
    if value.denominator != 1:
        raise DomainError(f"e_sigma={value} is not an integer")
    return int(value)


def eisenstein_mu_admissible(n: int, k: Any, l: int, mu: Any) -> Dict[str, Any]:
    """Conditions on ``mu`` for near holomorphy of the normalized Eisenstein series at ``mu/2``."""
    k = to_fraction(k)
    mu = to_fraction(mu)
    half = Fraction(l, 2)
    centre = Fraction(n + 1, 2)
    first = n + 1 - (k - half) <= mu - half <= k - half
    parity_value = abs(mu - half - centre) + centre - k + half
    second = parity_value.denominator == 1 and parity_value % 2 == 0
    return {"i": first, "ii": second, "admissible": first and second}


def eisenstein_exponents(
    n: int,
    k: Any,
    l: int,
    mu: Any,
    *,
    chi_squared_trivial: bool = False,
    chi_psi_trivial: bool = False,
) -> Dict[str, Fraction]:
    """Power of pi ``beta``, its correction ``e`` and the degree ``r`` of near holomorphy."""
    k = to_fraction(k)
    mu = to_fraction(mu)
    half = Fraction(l, 2)
    parity = 2 * mu - l + n
    if parity.denominator == 1 and parity % 2 == 0 and mu >= n + half:
        e = Fraction((n + 1) ** 2 // 4) - mu + half
    else:
        e = Fraction(n * n // 4)
    beta = Fraction(n, 2) * (k - l + mu) - e
    if mu == Fraction(n + 2, 2) + half and chi_squared_trivial:
        r = Fraction(n, 2) * (k - mu + 2)
    elif n == 1 and mu == 2 + half and chi_psi_trivial:
        r = k / 2 - Fraction(l, 4)
    else:
        centre = Fraction(n + 1, 2)
        r = Fraction(n, 2) * k - Fraction(n, 2) * (half + abs(mu - half - centre) + centre)
    return {"beta": beta, "e": e, "r": r}


def eisenstein_growth_range(n: int, k: Any, l: int) -> Tuple[Fraction, Fraction]:
    """Open interval of ``s`` on which the doubled Eisenstein series has bounded growth."""
    k = to_fraction(k)
    return (2 * n + 1 + Fraction(l, 2)) / 2, (k - l) / 2 - 2 * n


def eisenstein_projection_data(n: int, k: Any, l: int, mu: Any) -> Dict[str, Fraction]:
    """Degree ``D`` and det-form exponent ``m`` of the doubled series at ``mu/2``."""
    k = to_fraction(k)
    mu = to_fraction(mu)
    low, high = eisenstein_growth_range(n, k, l)
    return {
        "D": n * (k - mu),
        "m": (k - mu) / 2,
        "bounded_growth": low < mu / 2 < high,
    }


def _check_window(spec: LSeriesSpec, sigma: Fraction, override: bool) -> None:
    window = sigma_window(spec.n, spec.k, spec.l, sigma)
    if window["inside"]:
        return
    message = (
        f"sigma={format_fraction(sigma)} violates {window['upper']} > sigma/2 > {window['lower']} "
        f"for n={spec.n}, k={format_fraction(spec.k)}, l={spec.l}"
    )
    if not override:
        raise WindowError(message)
    logger.warning("%s; continuing because the window check was overridden", message)


def bold_lambda(
    spec: LSeriesSpec,
    sigma: Any,
    cutoff: int | None = None,
    *,
    override: bool = False,
    precision: int | None = None,
):
    """``L(sigma - n - l/2, f, chi)``, times ``L_c(sigma - l/2, chi psi_S)`` when ``l`` is even."""
    sigma = to_fraction(sigma)
    _check_window(spec, sigma, override)
    with mp.workprec(resolve_precision(precision)):
        value = standard_L(spec, sigma - spec.n - spec.half_l, cutoff, override=override, precision=precision)
        if spec.l % 2 == 0 and value != 0:
            extra = dirichlet_L_depleted(sigma - spec.half_l, spec.chi_psi, spec.level, precision=precision)
            value *= fraction_to_mpf(extra) if isinstance(extra, Fraction) else extra
        return +value


def normalized_special_value(
    spec: LSeriesSpec,
    sigma: Any,
    petersson_norm: Any,
    cutoff: int | None = None,
    *,
    max_height: int = DEFAULT_MAX_HEIGHT,
    override: bool = False,
    precision: int | None = None,
) -> Tuple[Any, Dict[str, Any]]:
    """``bold-Lambda(sigma/2) / (pi^{e_sigma} <f, f>)`` and a rational recognition report."""
    sigma = to_fraction(sigma)
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        norm = mp.mpmathify(petersson_norm)
        if abs(mp.im(norm)) > mp.ldexp(abs(norm), -(bits // 2)) or mp.re(norm) <= 0:
            raise DomainError(f"<f, f> must be positive, got {mp.nstr(norm, 15)}")
        norm = mp.re(norm)
        exponent = exponent_e_sigma(spec.n, spec.k, spec.l, sigma)
        numerator = bold_lambda(spec, sigma, cutoff, override=override, precision=bits)
        value = numerator / (mp.power(mp.pi, exponent) * norm)
        report = {
            "label": spec.label,
            "sigma": format_fraction(sigma),
            "e_sigma": exponent,
            "bold_lambda": mp.nstr(numerator, 30),
            "petersson_norm": mp.nstr(norm, 30),
            "window": sigma_window(spec.n, spec.k, spec.l, sigma),
            "recognition": recognition_report(value, max_height, precision=bits),
        }
        return +value, report
