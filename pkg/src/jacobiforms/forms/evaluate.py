"""Numeric evaluation of truncated expansions."""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Tuple

import sympy
from mpmath import mp

from ..config import default_tolerance, resolve_precision
from ..numth.exact import fraction_to_mpf
from . import linalg
from .expansion import JacobiExpansion
from .group import JacobiPoint

logger = logging.getLogger(__name__)


def _e(x):
    return mp.expjpi(2 * x)


def _point(f: JacobiExpansion, tau: Any, w: Any) -> JacobiPoint:
    point = JacobiPoint.of(tau, w)
    if point.tau.rows != f.n or point.w.rows != f.l or point.w.cols != f.n:
        raise ValueError(f"point does not match degree {f.n} and index size {f.l}")
    y = point.y()
    if f.n == 1:
        positive = y[0, 0] > 0
    else:
        positive = all(ev > 0 for ev in mp.eigsy(y)[0])
    if not positive:
        raise ValueError("Im(tau) must be positive definite")
    return point


def _terms(f: JacobiExpansion, z: JacobiPoint) -> List[Tuple[Any, Any]]:
    """Pairs ``(trace(t), c(t,r) e(tr(t tau)/lambda + tr(r^T w)))``."""
    out = []
    for (t, r), c in f.items():
        phase = linalg.mp_trace(linalg.to_mp(t) * z.tau) / f.lambda_level
        phase += linalg.mp_trace(linalg.to_mp(r).T * z.w)
        out.append((linalg.trace(t), fraction_to_mpf(c) * _e(phase)))
    return out


def truncation_tail(f: JacobiExpansion, tau: Any, w: Any, *, precision: int | None = None):
    """Size of the outermost stored shell, used as a proxy for the omitted tail."""
    with mp.workprec(resolve_precision(precision)):
        z = _point(f, tau, w)
        terms = _terms(f, z)
        if not terms:
            return mp.mpf(0)
        outer = [abs(value) for trace, value in terms if trace > f.cap - 1]
        return max(outer) if outer else mp.mpf(0)


def evaluate(
    f: JacobiExpansion,
    tau: Any,
    w: Any,
    *,
    precision: int | None = None,
    tolerance: float | None = None,
):
    """Value of the truncated series at ``(tau, w)``.

    Logs a warning when the outermost shell is larger than ``tolerance``
    relative to the value, i.e. the truncation probably dominates the error.
    """
    tolerance = default_tolerance() if tolerance is None else tolerance
    with mp.workprec(resolve_precision(precision)):
        z = _point(f, tau, w)
        terms = _terms(f, z)
        value = mp.fsum(term for _, term in terms) if terms else mp.mpc(0)
        outer = [abs(term) for trace, term in terms if trace > f.cap - 1]
        if outer:
            tail = max(outer)
            if tail > tolerance * max(abs(value), mp.mpf(1)):
                logger.warning(
                    "truncation at trace %s dominates: outer shell %s vs value %s",
                    f.cap,
                    mp.nstr(tail, 5),
                    mp.nstr(abs(value), 5),
                )
        return mp.mpc(value)


def omega_point(tau: Any, v: Any):
    """``w = v Omega_tau = v1 tau + v2`` for ``v = (v1 v2)`` of size ``l x 2n``."""
    tau_m = linalg.to_mp(tau)
    n = tau_m.rows
    v_m = linalg.to_mp(v)
    if v_m.cols != 2 * n:
        raise ValueError(f"v must have {2 * n} columns, got {v_m.cols}")
    v1 = mp.matrix(v_m.rows, n)
    v2 = mp.matrix(v_m.rows, n)
    for i in range(v_m.rows):
        for j in range(n):
            v1[i, j] = v_m[i, j]
            v2[i, j] = v_m[i, n + j]
    return v1 * tau_m + v2


def f_star_evaluate(f: JacobiExpansion, tau: Any, v: Any, *, precision: int | None = None):
    """``e(tr(S w (tau - conj(tau))^{-1} w^T)) f(tau, w)`` at ``w = v Omega_tau``."""
    with mp.workprec(resolve_precision(precision)):
        tau_m = linalg.to_mp(tau)
        w = omega_point(tau_m, v)
        s = linalg.to_mp(f.S.rows)
        diff = tau_m - tau_m.apply(mp.conj)
        prefactor = _e(linalg.mp_trace(s * w * linalg.mp_inverse(diff) * w.T))
        return prefactor * evaluate(f, tau_m, w, precision=precision)


def _radical_inverse(index: int, base: int) -> float:
    """Digits of ``index`` in ``base`` mirrored about the radix point."""
    result, denom = 0.0, 1.0
    while index:
        index, digit = divmod(index, base)
        denom *= base
        result += digit / denom
    return result


def halton_points(count: int, dimension: int) -> List[List[float]]:
    """First ``count`` Halton points in ``[0, 1)^dimension``.

    The sample is nested: the first ``m`` points of a larger sample are exactly
    the ``m``-point sample, so raising ``count`` in :func:`growth_profile` only adds
    points and the reported sup can only grow.
    """
    bases = [int(sympy.prime(i + 1)) for i in range(dimension)]
    return [[_radical_inverse(i, b) for b in bases] for i in range(1, count + 1)]


def growth_profile(
    f: JacobiExpansion,
    sample_count: int,
    *,
    y_max: float = 4.0,
    precision: int | None = None,
) -> Dict[str, Any]:
    """Sample ``det(y)^{k/2} e^{-2 pi tr(y^{-1} S[v])} |f(z)|`` on a degree-one fundamental domain.

    Points are ``|x| <= 1/2``, ``|tau| >= 1``, ``y <= y_max`` and
    ``w = alpha tau + beta`` with ``alpha, beta in [0,1)^l``.  The sample is
    deterministic, so doubling ``sample_count`` only adds points.
    """
    if f.n != 1:
        raise ValueError("growth_profile samples degree one only")
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    l = f.l
    with mp.workprec(resolve_precision(precision)):
        s = linalg.to_mp(f.S.rows)
        best, best_point, total = mp.mpf(0), None, mp.mpf(0)
        for point in halton_points(sample_count, 2 + 2 * l):
            x = mp.mpf(point[0]) - mp.mpf(1) / 2
            floor = mp.sqrt(1 - x * x)
            y = floor + mp.mpf(point[1]) * (y_max - floor)
            tau = mp.mpc(x, y)
            alpha = [mp.mpf(a) for a in point[2 : 2 + l]]
            beta = [mp.mpf(b) for b in point[2 + l :]]
            w = mp.matrix([[alpha[i] * tau + beta[i]] for i in range(l)])
            v = w.apply(mp.im)
            weight = mp.power(y, f.k.numerator / mp.mpf(2 * f.k.denominator))
            damping = mp.exp(-2 * mp.pi * (v.T * s * v)[0, 0] / y)
            value = weight * damping * abs(evaluate(f, mp.matrix([[tau]]), w, precision=precision, tolerance=mp.inf))
            total += value
            if value > best or best_point is None:
                best, best_point = value, (tau, [alpha[i] * tau + beta[i] for i in range(l)])
        return {
            "samples": sample_count,
            "sup": best,
            "mean": total / sample_count,
            "argsup": {"tau": best_point[0], "w": best_point[1]},
        }
