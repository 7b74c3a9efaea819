"""Petersson pairings.

Closed forms against Poincare series of exponential type, the constant of
the reproducing kernel, and a numerical Petersson integral in degree one.

The degree-one integral runs over ``|x| <= 1/2``, ``|tau| >= 1`` and
``w = alpha tau + beta`` with ``alpha, beta in [0,1)^l``.  ``beta`` is
integrated by orthogonality (only equal ``r`` pair up), ``alpha`` through
erf for diagonal ``S`` and ``x`` in closed form, which leaves a single
tanh-sinh quadrature in ``y`` per class ``r``.  The volume of that domain is
``pi/3``.

:func:`unfolded_pairing` computes ``<f, P_{t,r}>`` numerically from the
unfolded integral. It equals the closed form with the stated constant
times ``2^{-nl/2}``: the Gaussian identity gives ``det(4S)^{-n/2}`` for the
``v`` integral where the stated constant carries ``det(2S)^{-n/2}``. The
kernel check uses the unfolded normalization.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple, Union

from mpmath import mp

from .config import default_tolerance, resolve_precision
from .errors import ConvergenceError, DomainError, NonPositiveError, WeightBoundError
from .forms import linalg
from .forms.evaluate import evaluate
from .forms.expansion import JacobiExpansion, discriminant_matrix, format_index, index_key
from .forms.group import JacobiPoint
from .forms.index import IndexMatrix
from .numth.exact import ExactProduct, fraction_to_mpf, to_fraction
from .numth.special import gamma_n
from .projection.hol import NearlyHolExpansion, hol_project, holomorphic_weight_offset

logger = logging.getLogger(__name__)

VOLUME_SYMBOL = "vol"
ADJOINTNESS_TOLERANCE = 1e-4
KERNEL_TOLERANCE = 1e-6
NORMALIZATIONS = ("stated", "unfolded")

Form = Union[JacobiExpansion, NearlyHolExpansion]


def kernel_constant(
    k: Any,
    n: int,
    l: int,
    S: Any,
    lambda_level: int = 1,
    vol: Any = None,
    *,
    precision: int | None = None,
    normalization: str = "stated",
):
    """``vol^{-1} det(2S)^{-n/2} Gamma_n(k - (n+l+1)/2) (pi/lambda)^{n(n+l+1)/2 - nk}``.

    With ``vol=None`` the volume stays a symbol named ``vol``; a rational
    volume is folded in exactly and anything else gives an mpmath number.

    ``normalization="unfolded"`` replaces ``det(2S)`` by ``det(4S)``, the
    factor the Gaussian identity gives for the ``v`` integral of the unfolded
    pairing. That is the constant matching :func:`petersson_quadrature`.
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}, expected one of {', '.join(NORMALIZATIONS)}")
    k = to_fraction(k)
    S = IndexMatrix.of(S)
    if S.l != l:
        raise ValueError(f"index matrix is {S.l}x{S.l} but l={l}")
    offset = holomorphic_weight_offset(n, l)
    if k <= offset:
        raise DomainError(f"the kernel constant needs k > {offset}, got k={k}")
    exponent = n * offset - n * k
    radicals = [(S.det_2s, Fraction(-n, 2)), (lambda_level, -exponent)]
    if normalization == "unfolded":
        radicals.append((2, Fraction(-n * l, 2)))
    value = ExactProduct.build(
        1,
        pi_exponent=exponent,
        radicals=radicals,
        symbols={VOLUME_SYMBOL: -1},
    ) * gamma_n(n, k - offset)
    if vol is None:
        return value
    if not isinstance(vol, (int, Fraction, str)):
        return value.numeric(precision, symbols={VOLUME_SYMBOL: vol})
    return value * ExactProduct.build(1, symbols={VOLUME_SYMBOL: 1}) / to_fraction(vol)


@dataclass(frozen=True)
class PairingResult:
    """A Petersson pairing, exact for closed forms and numeric for quadratures."""

    value: Any
    method: str
    label: str = ""

    def __post_init__(self) -> None:
        if self.method not in ("closed-form", "quadrature"):
            raise ValueError(f"unknown pairing method {self.method!r}")
        if self.method == "closed-form" and not isinstance(self.value, ExactProduct):
            raise ValueError("closed-form pairings must carry an exact value")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, ExactProduct)

    def numeric(self, precision: int | None = None, *, vol: Any = None):
        if not self.is_exact:
            return self.value
        symbols = {} if vol is None else {VOLUME_SYMBOL: vol}
        return self.value.numeric(precision, symbols=symbols)

    def as_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"method": self.method, "label": self.label}
        if self.is_exact:
            record["value"] = str(self.value)
            record["exact"] = self.value.as_record()
        else:
            record["value"] = mp.nstr(self.value, 20)
        return record


def pair_with_poincare(f: JacobiExpansion, t: Any, r: Any) -> PairingResult:
    """``<f, P_{t,r}> = C det(4t - lambda S^{-1}[r])^{-k+(n+l+1)/2} c(t,r)``.

    Indices outside the stored support pair to zero.
    """
    if not f.cuspidal:
        raise DomainError("pairings with Poincare series need a cuspidal expansion")
    if f.k <= 2 * f.n + f.l:
        raise WeightBoundError(f"Poincare series need k > 2n + l = {2 * f.n + f.l}, got k={f.k}")
    key = index_key(t, r, n=f.n, l=f.l)
    t_m, r_m = key
    h = discriminant_matrix(f.S, t_m, r_m, f.lambda_level)
    if not linalg.is_positive_definite(t_m) or not linalg.is_positive_definite(h):
        raise NonPositiveError(f"Poincare series need t > 0 and 4t - lambda S^-1[r] > 0 at {format_index(key)}")
    if linalg.trace(t_m) > f.cap:
        logger.warning("%s lies beyond the truncation %s; its coefficient is taken as 0", format_index(key), f.cap)
    c = f.coefficient(t_m, r_m)
    constant = kernel_constant(f.k, f.n, f.l, f.S, f.lambda_level)
    exponent = -f.k + holomorphic_weight_offset(f.n, f.l)
    value = constant * ExactProduct.power(linalg.det(h), exponent) * c
    return PairingResult(value, "closed-form", label=f"<{f.label or 'f'},P[{format_index(key)}]>")


def _is_cuspidal(form: Form) -> bool:
    if isinstance(form, JacobiExpansion):
        return form.cuspidal
    return all(
        linalg.is_positive_definite(discriminant_matrix(form.S, t, r, form.lambda_level))
        for (t, r), _ in form.items()
    )


def _check_pair(f: Form, g: Form) -> None:
    for form in (f, g):
        if form.n != 1:
            raise DomainError("the Petersson quadrature is implemented in degree one")
        if form.lambda_level != 1 or getattr(form, "level", 1) != 1:
            raise DomainError("the Petersson quadrature integrates over the full-level fundamental domain")
    if f.k != g.k or f.S != g.S:
        raise ValueError("Petersson pairings need equal weight and index")
    if not (_is_cuspidal(f) or _is_cuspidal(g)):
        raise DomainError("one argument of a Petersson pairing must be cuspidal")


Profile = Dict[Tuple, List[Tuple[Fraction, List[Tuple[int, Fraction]]]]]


def _profile(form: Form) -> Profile:
    """Coefficients grouped by ``r``: ``(t, [(power of u, coefficient)])``."""
    if isinstance(form, NearlyHolExpansion) and form.det_form:
        form = form.as_general()
    out: Profile = {}
    for (t, r), value in form.items():
        if isinstance(value, Fraction):
            terms = [(0, value)]
        else:
            terms = [(mono[0], c) for mono, c in value.items()]
        out.setdefault(r, []).append((t[0][0], terms))
    return out


def _gaussian_cell(s, r, y):
    """``int_0^1 exp(-4 pi y (s a^2 + r a)) da``."""
    A = 4 * mp.pi * y * s
    c = r / (2 * s)
    root = mp.sqrt(A)
    lo, hi = root * c, root * (c + 1)
    if lo >= 0:
        diff = mp.erfc(lo) - mp.erfc(hi)
    elif hi <= 0:
        diff = mp.erfc(-hi) - mp.erfc(-lo)
    else:
        diff = mp.erf(hi) - mp.erf(lo)
    return mp.exp(A * c * c) * mp.sqrt(mp.pi) / (2 * root) * diff


def _heisenberg_factor(S: IndexMatrix, r: Sequence[Any], y):
    """``int_{[0,1)^l} exp(-4 pi y (S[alpha] + r^T alpha)) d alpha``."""
    l = S.l
    if S.is_diagonal:
        value = mp.mpf(1)
        for i in range(l):
            value *= _gaussian_cell(fraction_to_mpf(S.rows[i][i]), r[i], y)
        return value
    if l > 3:
        raise DomainError("non-diagonal index matrices are integrated for l <= 3 only")
    s = [[fraction_to_mpf(x) for x in row] for row in S.rows]

    def integrand(*alpha):
        q = mp.fsum(s[i][j] * alpha[i] * alpha[j] for i in range(l) for j in range(l))
        q += mp.fsum(r[i] * alpha[i] for i in range(l))
        return mp.exp(-4 * mp.pi * y * q)

    return mp.quad(integrand, *([[0, 1]] * l))


def _strip_factor(delta, y, w):
    """``int e(delta x) dx`` over the section of the fundamental domain at height ``y``.

    ``w = sqrt(1 - y^2)`` is the half-width of the excluded arc below ``y = 1``.
    """
    if y >= 1:
        return mp.mpf(1) if delta == 0 else mp.sinpi(delta) / (mp.pi * delta)
    if delta == 0:
        return 1 - 2 * w
    return (mp.sinpi(delta) - mp.sin(2 * mp.pi * delta * w)) / (mp.pi * delta)


def _to_mp(value):
    if isinstance(value, (int, Fraction)):
        return fraction_to_mpf(value)
    return mp.mpmathify(value)


def _class_integral(S: IndexMatrix, k: Fraction, r: Tuple, left, right):
    r_vec = [fraction_to_mpf(row[0]) for row in r]
    power = fraction_to_mpf(k) - 2
    left = [(fraction_to_mpf(t), [(e, _to_mp(c)) for e, c in terms]) for t, terms in left]
    right = [(fraction_to_mpf(t), [(e, mp.conj(_to_mp(c))) for e, c in terms]) for t, terms in right]

    def values(side, y):
        u = 1 / (mp.pi * y)
        return [(t, mp.fsum(c * u ** e for e, c in terms) * mp.exp(-2 * mp.pi * t * y)) for t, terms in side]

    def integrand(y):
        a_vals = values(left, y)
        b_vals = values(right, y)
        w = mp.sqrt(1 - y * y) if y < 1 else mp.mpf(0)
        strips: Dict[Any, Any] = {}
        terms = []
        # the x-integral of e(ta x) conj(e(tb x)) is real; right coefficients are already conjugated
        for ta, a in a_vals:
            for tb, b in b_vals:
                delta = ta - tb
                if delta not in strips:
                    strips[delta] = _strip_factor(delta, y, w)
                terms.append(a * b * strips[delta])
        inner = mp.fsum(terms)
        return mp.power(y, power) * _heisenberg_factor(S, r_vec, y) * inner

    return mp.quad(integrand, [mp.sqrt(3) / 2, 1, 2, mp.inf], error=True)


def petersson_quadrature(f: Form, g: Form, *, precision: int | None = None):
    """``vol^{-1} int f conj(g) Delta_{S,k} dz`` over the degree-one fundamental domain.

    Either argument may be nearly holomorphic; one of them must be cuspidal.
    """
    _check_pair(f, g)
    with mp.workprec(resolve_precision(precision)):
        return _integrate(f.S, f.k, _profile(f), _profile(g))


def _integrate(S: IndexMatrix, k: Fraction, left: Profile, right: Profile):
    """Fundamental-domain integral of two coefficient profiles at the current precision."""
    classes = sorted(set(left) & set(right))
    tolerance = default_tolerance()
    total = mp.mpf(0)
    for r in classes:
        value, error = _class_integral(S, k, r, left[r], right[r])
        if not mp.isfinite(value):
            raise ConvergenceError(f"Petersson quadrature diverged in the class r={linalg.format_matrix(r)}")
        if error > tolerance * abs(value):
            logger.warning(
                "quadrature error %s above tolerance in the class r=%s",
                mp.nstr(error, 5),
                linalg.format_matrix(r),
            )
        total += value
    logger.debug("Petersson quadrature over %d classes of r", len(classes))
    return mp.mpc(3 * total / mp.pi)


def adjointness_check(
    f: JacobiExpansion,
    g: Form,
    *,
    tolerance: float = ADJOINTNESS_TOLERANCE,
    absolute_tolerance: float = 1e-20,
    precision: int | None = None,
) -> Dict[str, Any]:
    """Compare ``<f, g>`` with ``<f, Hol(g)>`` by quadrature."""
    if isinstance(g, JacobiExpansion):
        g = NearlyHolExpansion.from_holomorphic(g)
    projected = hol_project(g)
    with mp.workprec(resolve_precision(precision)):
        lhs = petersson_quadrature(f, g, precision=precision)
        rhs = petersson_quadrature(f, projected, precision=precision)
        abs_error = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        rel_error = abs_error / scale if scale else mp.mpf(0)
        return {
            "lhs": lhs,
            "rhs": rhs,
            "abs_error": abs_error,
            "rel_error": rel_error,
            "tolerance": tolerance,
            "passed": bool(rel_error <= tolerance or abs_error <= absolute_tolerance),
        }


def _gaussian_factor(S: IndexMatrix, r: Sequence[Any], y):
    """``int_{R^l} exp(-4 pi y (S[alpha] + r^T alpha)) d alpha``, by quadrature.

    For diagonal ``S`` each coordinate is centred and rescaled to unit width
    so the rule behaves the same at every height ``y``.
    """
    l = S.l
    if S.is_diagonal:
        value = mp.mpf(1)
        for i in range(l):
            s = fraction_to_mpf(S.rows[i][i])
            centre = -r[i] / (2 * s)
            width = 1 / mp.sqrt(4 * mp.pi * y * s)

            def integrand(x, s=s, b=r[i], centre=centre, width=width):
                a = centre + width * x
                return mp.exp(-4 * mp.pi * y * (s * a * a + b * a))

            value *= width * mp.quad(integrand, [-mp.inf, 0, mp.inf])
        return value
    if l > 2:
        raise DomainError("non-diagonal index matrices are unfolded for l <= 2 only")
    s = [[fraction_to_mpf(x) for x in row] for row in S.rows]
    centre = mp.lu_solve(mp.matrix(s), mp.matrix(r)) * (-mp.mpf(1) / 2)

    def integrand(*alpha):
        q = mp.fsum(s[i][j] * alpha[i] * alpha[j] for i in range(l) for j in range(l))
        q += mp.fsum(r[i] * alpha[i] for i in range(l))
        return mp.exp(-4 * mp.pi * y * q)

    return mp.quad(integrand, *[[-mp.inf, centre[i], mp.inf] for i in range(l)])


def unfolded_pairing(f: JacobiExpansion, t: Any, r: Any, *, precision: int | None = None) -> PairingResult:
    """``<f, P_{t,r}>`` by numerical integration over the unfolded domain.

    In degree one the Poincare series unfolds to ``x`` over a period, ``w =
    alpha tau + beta`` with ``beta`` in ``[0,1)^l`` and ``alpha`` over all of
    ``R^l``, and ``y > 0``. The ``x`` and ``beta`` integrals keep only the
    coefficient at ``(t, r)``; the ``alpha`` and ``y`` integrals run through
    ``mp.quad``. Nothing here uses :func:`kernel_constant`.
    """
    _check_pair(f, f)
    if f.k <= 2 * f.n + f.l:
        raise WeightBoundError(f"Poincare series need k > 2n + l = {2 * f.n + f.l}, got k={f.k}")
    t_m, r_m = index_key(t, r, n=f.n, l=f.l)
    h = discriminant_matrix(f.S, t_m, r_m, f.lambda_level)
    if not linalg.is_positive_definite(t_m) or not linalg.is_positive_definite(h):
        raise NonPositiveError(f"Poincare series need t > 0 and 4t - S^-1[r] > 0 at {format_index((t_m, r_m))}")
    label = f"<{f.label or 'f'},P[{format_index((t_m, r_m))}]>"
    c = f.coefficient(t_m, r_m)
    with mp.workprec(resolve_precision(precision)):
        if c == 0:
            return PairingResult(mp.mpc(0), "quadrature", label=label)
        t_val = fraction_to_mpf(t_m[0][0])
        r_vec = [fraction_to_mpf(row[0]) for row in r_m]
        power = fraction_to_mpf(f.k) - 2

        def integrand(y):
            return mp.power(y, power) * mp.exp(-4 * mp.pi * t_val * y) * _gaussian_factor(f.S, r_vec, y)

        value, error = mp.quad(integrand, [0, 1, mp.inf], error=True)
        if not mp.isfinite(value) or value <= 0:
            raise ConvergenceError(f"unfolded integral failed at {format_index((t_m, r_m))}")
        if error > default_tolerance() * value:
            logger.warning("unfolded integral error %s at %s", mp.nstr(error, 5), format_index((t_m, r_m)))
        return PairingResult(mp.mpc(3 * fraction_to_mpf(c) * value / mp.pi), "quadrature", label=label)


def _phase(t, r, z: JacobiPoint, lambda_level: int):
    value = linalg.mp_trace(linalg.to_mp(t) * z.tau) / lambda_level
    value += linalg.mp_trace(linalg.to_mp(r).T * z.w)
    return mp.expjpi(2 * value)


def kernel_check(
    f: JacobiExpansion,
    points: Sequence[Tuple[Any, Any]],
    *,
    tolerance: float = KERNEL_TOLERANCE,
    precision: int | None = None,
) -> List[Dict[str, Any]]:
    """``<f, K(., z2)>`` against ``f(z2)`` on the cusp space spanned by ``f``.

    ``K(., z2) = C^{-1} sum det(h)^{k-(n+l+1)/2} conj(e(t tau2 + r^T w2)) P_{t,r}``
    over the stored support, with ``C`` the unfolded kernel constant. Each
    ``P_{t,r}`` is replaced by its projection ``conj(<f, P_{t,r}>) / <f, f> f``
    where ``<f, P_{t,r}>`` comes from :func:`unfolded_pairing` and ``<f, f>``
    from :func:`petersson_quadrature`. The kernel is then an explicit expansion
    and ``<f, K>`` is integrated over the fundamental domain.
    """
    if f.n != 1:
        raise DomainError("kernel checks need the degree-one quadrature")
    if not f.cuspidal:
        raise DomainError("the reproducing kernel lives on cusp forms")
    offset = holomorphic_weight_offset(f.n, f.l)
    profile = _profile(f)
    reports: List[Dict[str, Any]] = []
    with mp.workprec(resolve_precision(precision)):
        norm = petersson_quadrature(f, f, precision=precision).real
        if norm <= 0:
            raise ConvergenceError(f"non-positive Petersson norm {mp.nstr(norm, 5)}")
        constant = kernel_constant(
            f.k, f.n, f.l, f.S, f.lambda_level, vol=mp.pi / 3, precision=precision, normalization="unfolded"
        )
        # coefficient of f in det(h)^{k-offset} P_{t,r}
        projections = []
        for (t, r), _ in f.items():
            pairing = unfolded_pairing(f, t, r, precision=precision).value
            h = discriminant_matrix(f.S, t, r, f.lambda_level)
            weight = mp.power(fraction_to_mpf(linalg.det(h)), fraction_to_mpf(f.k - offset))
            projections.append((t, r, weight * mp.conj(pairing) / norm))
        logger.debug("kernel built from %d Poincare projections, norm %s", len(projections), mp.nstr(norm, 10))
        for tau, w in points:
            z = JacobiPoint.of(tau, w)
            kappa = mp.fsum(a * mp.conj(_phase(t, r, z, f.lambda_level)) for t, r, a in projections) / constant
            kernel = {
                key: [(t, [(e, kappa * _to_mp(c)) for e, c in terms]) for t, terms in rows]
                for key, rows in profile.items()
            }
            pairing = _integrate(f.S, f.k, profile, kernel)
            value = evaluate(f, z.tau, z.w, precision=precision)
            abs_error = abs(pairing - value)
            rel_error = abs_error / abs(value) if value else abs_error
            reports.append(
                {
                    "tau": z.tau[0, 0],
                    "w": [z.w[i, 0] for i in range(z.w.rows)],
                    "pairing": pairing,
                    "value": value,
                    "abs_error": abs_error,
                    "rel_error": rel_error,
                    "passed": bool(rel_error <= tolerance),
                }
            )
    return reports
