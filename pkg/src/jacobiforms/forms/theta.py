"""Theta series, theta decomposition and cuspidality checks."""

from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from ..errors import InconsistencyError
from ..numth.exact import ExactProduct, format_fraction, to_fraction
from . import linalg
from .expansion import Index, JacobiExpansion, ThetaComponents, discriminant_matrix
from .index import IndexMatrix
from .linalg import Matrix

logger = logging.getLogger(__name__)


def canonical_class(S: IndexMatrix, r: Matrix) -> Matrix:
    """Representative ``S^{-1} r mod 2`` of the class of ``r`` in ``Lambda1/Lambda2``."""
    return linalg.reduce_mod(linalg.matmul(S.inverse, r), 2)


def theta_classes(S: IndexMatrix, n: int = 1) -> List[Matrix]:
    """All representatives ``h`` of ``Lambda1/Lambda2``, sorted."""
    d = S.det_2s
    columns = set()
    for r in itertools.product(range(d), repeat=S.l):
        column = tuple((Fraction(x),) for x in r)
        columns.add(canonical_class(S, column))
    ordered = sorted(columns)
    classes = []
    for combo in itertools.product(ordered, repeat=n):
        classes.append(tuple(tuple(col[i][0] for col in combo) for i in range(S.l)))
    return sorted(classes)


def _column_vectors(
    S: IndexMatrix, basis: Matrix, shift: Sequence[Fraction], cap: Fraction
) -> List[Tuple[Tuple[Fraction, ...], Fraction]]:
    """Vectors ``y = (B z + shift)/2`` with ``S[y] <= cap`` and their norms."""
    l = S.l
    form = linalg.scale(linalg.quadratic(S.rows, basis), Fraction(1, 4))
    form_inv = linalg.inverse(form)
    shift_col = tuple((x,) for x in shift)
    centre = linalg.matmul(linalg.inverse(basis), shift_col)
    ranges = []
    for i in range(l):
        radius = math.sqrt(float(cap * form_inv[i][i])) + 1
        mid = -float(centre[i][0])
        ranges.append(range(math.floor(mid - radius), math.ceil(mid + radius) + 1))

    found = []
    for z in itertools.product(*ranges):
        x = linalg.matmul(basis, tuple((Fraction(zi),) for zi in z))
        y = tuple((x[i][0] + shift[i]) / 2 for i in range(l))
        y_col = tuple((yi,) for yi in y)
        norm = linalg.quadratic(S.rows, y_col)[0][0]
        if norm <= cap:
            found.append((y, norm))
    return found


def theta_series(
    S: Any,
    *,
    h: Any = None,
    L: Any = None,
    cap: Any = 6,
    n: int = 1,
) -> JacobiExpansion:
    """Theta series of characteristic ``h`` over the lattice ``L``.

    Sums ``e(tr(t tau) + tr(r^T w))`` over ``x in L`` with ``y = (x + h)/2``,
    ``t = y^T S y`` and ``r = 2 S y``; ``L`` is given by an ``l x l`` basis
    (default ``2 I``, i.e. ``Lambda2``). The result has weight ``l/2``.
    """
    S = IndexMatrix.of(S)
    cap = to_fraction(cap)
    if cap < 0:
        raise ValueError("truncation must be non-negative")
    l = S.l
    basis = linalg.scale(linalg.identity(l), 2) if L is None else linalg.as_matrix(L, rows=l, cols=l)
    if linalg.det(basis) == 0:
        raise ValueError("lattice basis is singular")
    h_m = linalg.zeros(l, n) if h is None else linalg.as_matrix(h, rows=l, cols=n)

    per_column = [_column_vectors(S, basis, [h_m[i][j] for i in range(l)], cap) for j in range(n)]
    coefficients: Dict[Index, Fraction] = {}
    for combo in itertools.product(*per_column):
        if sum((norm for _, norm in combo), Fraction(0)) > cap:
            continue
        y = tuple(tuple(combo[j][0][i] for j in range(n)) for i in range(l))
        t = linalg.quadratic(S.rows, y)
        r = linalg.matmul(S.two_s, y)
        if not linalg.is_integral(r):
            raise ValueError(f"characteristic {linalg.format_matrix(h_m)} does not give integral r")
        key = (t, r)
        coefficients[key] = coefficients.get(key, Fraction(0)) + 1
    logger.debug("theta series for S=%s h=%s: %d terms", S, linalg.format_matrix(h_m), len(coefficients))
    return JacobiExpansion(
        n=n,
        k=Fraction(l, 2),
        S=S,
        coefficients=coefficients,
        cap=cap,
        label=f"theta h={linalg.format_matrix(h_m)}",
    )


def theta_exponent(S: IndexMatrix, t: Matrix, r: Matrix, lambda_level: int) -> Matrix:
    """``t/lambda - S^{-1}[r]/4``."""
    return linalg.sub(linalg.scale(t, Fraction(1, lambda_level)), linalg.scale(S.inverse_form(r), Fraction(1, 4)))


def theta_decompose(f: JacobiExpansion) -> ThetaComponents:
    """Split ``f`` into components ``f_h`` of weight ``k - l/2``."""
    experimental = not f.S.is_diagonal
    if experimental:
        logger.warning("theta decomposition for non-diagonal S=%s is experimental", f.S)
    components: Dict[Matrix, Dict[Matrix, Fraction]] = {}
    origins: Dict[Tuple[Matrix, Matrix], Index] = {}
    for (t, r), value in f.items():
        h = canonical_class(f.S, r)
        exponent = theta_exponent(f.S, t, r, f.lambda_level)
        series = components.setdefault(h, {})
        if exponent in series and series[exponent] != value:
            other = origins[(h, exponent)]
            raise InconsistencyError(
                f"coefficients at (t={linalg.format_matrix(t)}, r={linalg.format_matrix(r)}) and "
                f"(t={linalg.format_matrix(other[0])}, r={linalg.format_matrix(other[1])}) share "
                f"h={linalg.format_matrix(h)} and exponent {linalg.format_matrix(exponent)} but differ"
            )
        series[exponent] = value
        origins[(h, exponent)] = (t, r)
    return ThetaComponents(
        n=f.n,
        S=f.S,
        weight=f.k - Fraction(f.S.l, 2),
        components=components,
        cap=f.cap,
        lambda_level=f.lambda_level,
        experimental=experimental,
    )


def theta_reconstruct(tc: ThetaComponents, *, cap: Any = None, k: Any = None, cuspidal: bool = False) -> JacobiExpansion:
    """``sum_h f_h(tau) Theta_h(tau, w)`` truncated at ``cap``."""
    cap = tc.cap if cap is None else to_fraction(cap)
    weight = tc.weight + Fraction(tc.S.l, 2) if k is None else to_fraction(k)
    lam = tc.lambda_level
    coefficients: Dict[Index, Fraction] = {}
    for h, series in tc.components.items():
        theta = theta_series(tc.S, h=h, cap=cap / lam, n=tc.n)
        for exponent, value in series.items():
            for (t0, r0), multiplicity in theta.items():
                t = linalg.scale(linalg.add(exponent, t0), lam)
                if linalg.trace(t) > cap:
                    continue
                key = (t, r0)
                coefficients[key] = coefficients.get(key, Fraction(0)) + value * multiplicity
    return JacobiExpansion(
        n=tc.n,
        k=weight,
        S=tc.S,
        coefficients=coefficients,
        cap=cap,
        lambda_level=lam,
        cuspidal=cuspidal,
    )


def round_trip_report(f: JacobiExpansion) -> Dict[str, Any]:
    """Compare ``theta_reconstruct(theta_decompose(f))`` with ``f``."""
    rebuilt = theta_reconstruct(theta_decompose(f), cap=f.cap, k=f.k)
    mismatches = [key for key, value in f.items() if rebuilt.coefficients.get(key) != value]
    extra = [key for key in rebuilt.coefficients if key not in f.coefficients]
    return {
        "stored": len(f),
        "mismatches": len(mismatches),
        "extra": len(extra),
        "exact": not mismatches,
        "periodic": not mismatches and not extra,
    }


def is_cuspidal(f: JacobiExpansion) -> bool:
    """Strict positivity of ``4t - lambda S^{-1}[r]`` on the support."""
    return all(
        linalg.is_positive_definite(discriminant_matrix(f.S, t, r, f.lambda_level)) for (t, r), _ in f.items()
    )


def property_A_check(f: JacobiExpansion) -> Dict[str, Any]:
    """Per-class report of whether every theta component is cuspidal.

    At level one this decides Property A; at higher level it is only a
    necessary condition and the report says so.
    """
    tc = theta_decompose(f)
    rows = []
    passed = True
    for h, series in tc.components.items():
        minimum = min(series, key=linalg.trace)
        positive = all(linalg.is_positive_definite(exponent) for exponent in series)
        passed = passed and positive
        rows.append(
            {
                "h": linalg.format_matrix(h),
                "terms": len(series),
                "min_exponent": linalg.format_matrix(minimum),
                "cuspidal": positive,
            }
        )
    return {
        "passed": passed,
        "complete": f.level == 1 and f.lambda_level == 1,
        "classes": tc.class_count,
        "nonzero_classes": len(rows),
        "experimental": tc.experimental,
        "components": rows,
    }


def theta_pairing_factor(S: Any, n: int = 1) -> ExactProduct:
    """``det(4S)^{-n/2}``, relating Petersson products of a form and of its theta components."""
    S = IndexMatrix.of(S)
    det_4s = S.det * 4 ** S.l
    return ExactProduct.power(det_4s, Fraction(-n, 2))


def describe_components(tc: ThetaComponents) -> List[Dict[str, str]]:
    return [
        {"h": linalg.format_matrix(h), "D": linalg.format_matrix(exponent), "c": format_fraction(value)}
        for h, series in tc.components.items()
        for exponent, value in series.items()
    ]
