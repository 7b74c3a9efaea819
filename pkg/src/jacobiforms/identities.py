"""Numerical validators for the integral and group identities the library relies on.

Each check returns a :class:`ValidationReport`.  ``DEFAULT_GRIDS`` holds the
parameter sets shipped with the package; ``run_grid`` replays one of them so a
failure can be reproduced from its record alone.
"""

from __future__ import annotations

import functools
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from mpmath import mp
from sympy.integrals.quadrature import gauss_hermite

from .config import default_tolerance, resolve_precision
from .errors import ConvergenceError, DomainError, NonPositiveError
from .forms import linalg
from .forms.group import GroupElement, JacobiPoint, delta, eval_J, random_element, random_point
from .numth.exact import ExactProduct, format_fraction, fraction_to_mpf, to_fraction
from .numth.special import gamma_n

logger = logging.getLogger(__name__)

GROUP_TOLERANCE = 1e-20
GROUP_WEIGHT = 12

# Gauss-Hermite nodes per axis, by number of real variables.
HERMITE_NODES = {1: 48, 2: 32, 3: 20, 4: 14}
HERMITE_CHECK_OFFSET = 4


@dataclass(frozen=True)
class ValidationReport:
    identity: str
    parameters: Dict[str, Any]
    lhs: Any
    rhs: Any
    abs_error: Any
    rel_error: Any
    precision: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.rel_error <= self.tolerance)

    def as_record(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "parameters": {key: _jsonable(value) for key, value in self.parameters.items()},
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "abs_error": _jsonable(self.abs_error),
            "rel_error": _jsonable(self.rel_error),
            "precision": self.precision,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (mp.mpf, mp.mpc)):
        return mp.nstr(value, 25)
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, complex):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(entry) for entry in value]
    if isinstance(value, dict):
        return {key: _jsonable(entry) for key, entry in value.items()}
    return value


def _compare(identity: str, parameters: Dict[str, Any], lhs, rhs, bits: int, tolerance: float) -> ValidationReport:
    abs_error = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_error = abs_error / scale if scale else mp.mpf(0)
    report = ValidationReport(identity, parameters, lhs, rhs, abs_error, rel_error, bits, tolerance)
    logger.debug("%s %s: rel_error=%s", identity, parameters, mp.nstr(rel_error, 5))
    return report


def _quad(function, *intervals, tolerance: float, label: str):
    value, error = mp.quad(function, *intervals, error=True)
    if not mp.isfinite(value):
        raise ConvergenceError(f"{label}: quadrature returned {value}")
    if error > tolerance * max(abs(value), mp.mpf(1)):
        logger.warning("%s: quadrature error estimate %s exceeds tolerance %s", label, mp.nstr(error, 5), tolerance)
    return value


def _scalar(value: Any):
    if isinstance(value, (int, Fraction)):
        return fraction_to_mpf(to_fraction(value))
    return mp.mpmathify(value)


def _exact_scalar(value: Any) -> Fraction | None:
    try:
        return to_fraction(value)
    except (TypeError, ValueError):
        return None


def _real_part_positive(m) -> bool:
    real = m.apply(mp.re)
    try:
        mp.cholesky(real)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def check_int_det(
    n: int,
    k: Any,
    tau: Any,
    *,
    tolerance: float | None = None,
    precision: int | None = None,
) -> ValidationReport:
    """``int_{Y_n} det(t)^{k-(n+1)/2} e^{-tr(t tau)} dt`` against ``Gamma_n(k) det(tau)^{-k}``.

    In degree two the inner integral over the off-diagonal entry ``b`` of
    ``t = [[a, b], [b, c]]`` is done with the Bessel-type series ``0F1``, which
    leaves a two-dimensional quadrature over ``a, c > 0``.
    """
    if n not in (1, 2):
        raise DomainError(f"cone quadrature is only available for n in {{1, 2}}, got n={n}")
    tolerance = default_tolerance() if tolerance is None else tolerance
    k_exact = _exact_scalar(k)
    bits = resolve_precision(precision)
    parameters: Dict[str, Any] = {"n": n, "k": k, "tau": tau}
    with mp.workprec(bits):
        k_mp = _scalar(k)
        if mp.re(k_mp) <= mp.mpf(n - 1) / 2:
            raise DomainError(f"the integral needs k > {Fraction(n - 1, 2)}, got k={k}")
        tau_m = linalg.to_mp(tau)
        if tau_m.rows != n or tau_m.cols != n:
            raise ValueError(f"tau must be {n}x{n}")
        if not _real_part_positive(tau_m):
            raise NonPositiveError("Re(tau) must be positive definite")

        if n == 1:
            t_val = tau_m[0, 0]
            lhs = _quad(lambda t: mp.power(t, k_mp - 1) * mp.exp(-t * t_val), [0, mp.inf], tolerance=tolerance, label="int_det")
            tau_exact = _exact_scalar(tau) if not isinstance(tau, (list, tuple)) else None
            if k_exact is not None and tau_exact is not None and tau_exact > 0 and (2 * k_exact).denominator == 1:
                exact = gamma_n(1, k_exact) * ExactProduct.power(tau_exact, -k_exact)
                parameters["exact_rhs"] = str(exact)
                rhs = exact.numeric(bits)
            else:
                rhs = mp.gamma(k_mp) * mp.power(t_val, -k_mp)
        else:
            p, q, r = tau_m[0, 0], tau_m[0, 1], tau_m[1, 1]
            if tau_m[1, 0] != q:
                raise ValueError("tau must be symmetric")
            inner = mp.sqrt(mp.pi) * mp.gamma(k_mp - mp.mpf(1) / 2) / mp.gamma(k_mp)
            q2 = q * q

            def integrand(a, c):
                ac = a * c
                return mp.power(ac, k_mp - 1) * mp.exp(-a * p - c * r) * mp.hyp0f1(k_mp, q2 * ac)

            lhs = inner * _quad(integrand, [0, mp.inf], [0, mp.inf], tolerance=tolerance, label="int_det")
            rhs = gamma_n(2, k, precision=bits)
            rhs = rhs.numeric(bits) if isinstance(rhs, ExactProduct) else rhs
            rhs = rhs * mp.power(p * r - q2, -k_mp)
        return _compare("int_det", parameters, lhs, rhs, bits, tolerance)


@functools.lru_cache(maxsize=None)
def _hermite_rule(m: int, digits: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    nodes, weights = gauss_hermite(m, digits)
    return tuple(str(x) for x in nodes), tuple(str(w) for w in weights)


def _hermite_tensor_sum(quadratic, linear, m: int) -> Any:
    """``sum prod(w) exp(-u^T Q u + c^T u + |u|^2)`` over the tensor Gauss-Hermite grid."""
    d = len(linear)
    node_text, weight_text = _hermite_rule(m, mp.dps + 10)
    nodes = [mp.mpf(x) for x in node_text]
    weights = [mp.mpf(w) for w in weight_text]
    # Q - I, the part of the exponent not absorbed by the Hermite weight.
    excess = [[quadratic[i][j] - (1 if i == j else 0) for j in range(d)] for i in range(d)]
    total = mp.mpf(0)
    for index in itertools.product(range(m), repeat=d):
        u = [nodes[i] for i in index]
        weight = mp.fprod(weights[i] for i in index)
        exponent = mp.fsum(linear[i] * u[i] for i in range(d))
        exponent -= mp.fsum(excess[i][j] * u[i] * u[j] for i in range(d) for j in range(d))
        total += weight * mp.exp(exponent)
    return total


def check_cool_id(
    l: int,
    n: int,
    S: Any,
    R: Any,
    A: Any,
    a: Any,
    *,
    tolerance: float | None = None,
    precision: int | None = None,
) -> ValidationReport:
    """Gaussian integral over real ``l x n`` matrices against its closed form.

    ``int exp(a tr(-S[X] A + R X A)) dX`` is compared with
    ``(det A)^{-l/2} (pi/a)^{nl/2} (det S)^{-n/2} exp(a/4 tr(S^{-1}[R^T] A))``,
    where ``S[X] = X^T S X`` and ``(det aA)^{-l/2}`` uses the principal branch.
    The left side is a tensor Gauss-Hermite rule after whitening the real part
    of the quadratic form.
    """
    if n not in (1, 2) or l not in (1, 2):
        raise DomainError(f"Gaussian quadrature is only available for n, l in {{1, 2}}, got n={n}, l={l}")
    tolerance = default_tolerance() if tolerance is None else tolerance
    bits = resolve_precision(precision)
    parameters = {"l": l, "n": n, "S": S, "R": R, "A": A, "a": a}
    with mp.workprec(bits):
        s_m, r_m, a_m = linalg.to_mp(S), linalg.to_mp(R), linalg.to_mp(A)
        scale = _scalar(a)
        if (s_m.rows, s_m.cols) != (l, l) or (r_m.rows, r_m.cols) != (n, l) or (a_m.rows, a_m.cols) != (n, n):
            raise ValueError(f"expected S {l}x{l}, R {n}x{l} and A {n}x{n}")
        if not _real_part_positive(s_m):
            raise NonPositiveError("S must be positive definite")
        if not _real_part_positive(a_m * scale):
            raise NonPositiveError("Re(a A) must be positive definite")

        d = l * n
        # vec(X) is indexed by (i, p) -> i * n + p.
        quadratic = mp.matrix(d, d)
        linear = [mp.mpf(0)] * d
        for i, p in itertools.product(range(l), range(n)):
            for j, q in itertools.product(range(l), range(n)):
                quadratic[i * n + p, j * n + q] = scale * s_m[i, j] * a_m[p, q]
            linear[i * n + p] = scale * mp.fsum(a_m[p, t] * r_m[t, i] for t in range(n))

        chol = mp.cholesky(quadratic.apply(mp.re))
        whiten = linalg.mp_inverse(chol).T
        q_white = whiten.T * quadratic * whiten
        c_white = [mp.fsum(whiten[j, i] * linear[j] for j in range(d)) for i in range(d)]
        rows = [[q_white[i, j] for j in range(d)] for i in range(d)]
        jacobian = abs(linalg.mp_det(whiten))

        m = HERMITE_NODES[d]
        lhs = jacobian * _hermite_tensor_sum(rows, c_white, m)
        coarse = jacobian * _hermite_tensor_sum(rows, c_white, m - HERMITE_CHECK_OFFSET)
        if abs(lhs - coarse) > tolerance * abs(lhs):
            logger.warning("cool_id: Hermite rules with %d and %d nodes differ by %s", m, m - HERMITE_CHECK_OFFSET, mp.nstr(abs(lhs - coarse), 5))

        shifted = r_m * linalg.mp_inverse(s_m) * r_m.T
        rhs = (
            mp.power(mp.pi, mp.mpf(n * l) / 2)
            * mp.power(linalg.mp_det(a_m * scale), -mp.mpf(l) / 2)
            * mp.power(linalg.mp_det(s_m), -mp.mpf(n) / 2)
            * mp.exp(scale / 4 * linalg.mp_trace(shifted * a_m))
        )
        return _compare("cool_id", parameters, lhs, rhs, bits, tolerance)


@dataclass(frozen=True)
class GroupSample:
    first: GroupElement
    second: GroupElement
    point: JacobiPoint = field(compare=False)


def random_group_samples(count: int, *, seed: int, l: int = 1, heisenberg_only: bool = False) -> List[GroupSample]:
    """Reproducible integral group elements and points in degree one."""
    rng = random.Random(seed)
    samples = []
    for _ in range(count):
        first = random_element(rng, l=l)
        second = random_element(rng, l=l)
        if heisenberg_only:
            first = GroupElement.build(lam=first.lam, mu=first.mu, kappa=first.kappa, l=l)
            second = GroupElement.build(lam=second.lam, mu=second.mu, kappa=second.kappa, l=l)
        samples.append(GroupSample(first, second, random_point(rng, l=l)))
    return samples


def _worst(identity: str, parameters: Dict[str, Any], pairs: Iterable[Tuple[Any, Any]], bits: int, tolerance: float) -> ValidationReport:
    worst = None
    count = 0
    for lhs, rhs in pairs:
        count += 1
        report = _compare(identity, parameters, lhs, rhs, bits, tolerance)
        if worst is None or report.rel_error > worst.rel_error:
            worst = report
    if worst is None:
        raise ValueError(f"{identity}: empty batch")
    parameters["count"] = count
    return worst


def check_cocycle(
    batch: Sequence[GroupSample],
    *,
    k: Any = GROUP_WEIGHT,
    S: Any = 1,
    tolerance: float = GROUP_TOLERANCE,
    precision: int | None = None,
) -> ValidationReport:
    """Worst case of ``J(g1 g2, z) = J(g1, g2 z) J(g2, z)`` over ``batch``."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):

        def pairs():
            for sample in batch:
                moved = sample.second.act(sample.point, precision=bits)
                lhs = eval_J(k, S, sample.first * sample.second, sample.point, precision=bits)
                rhs = eval_J(k, S, sample.first, moved, precision=bits) * eval_J(k, S, sample.second, sample.point, precision=bits)
                yield lhs, rhs

        return _worst("cocycle", {"k": k, "S": S}, pairs(), bits, tolerance)


def check_delta_invariance(
    batch: Sequence[GroupSample],
    *,
    k: Any = GROUP_WEIGHT,
    S: Any = 1,
    tolerance: float = GROUP_TOLERANCE,
    precision: int | None = None,
) -> ValidationReport:
    """Worst case of ``Delta(g z) = |J(g, z)|^{-2} Delta(z)`` for both elements of each sample."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):

        def pairs():
            for sample in batch:
                for g in (sample.first, sample.second):
                    lhs = delta(S, k, g.act(sample.point, precision=bits), precision=bits)
                    rhs = delta(S, k, sample.point, precision=bits) / abs(eval_J(k, S, g, sample.point, precision=bits)) ** 2
                    yield lhs, rhs

        return _worst("delta_invariance", {"k": k, "S": S}, pairs(), bits, tolerance)


def check_heisenberg_law(batch: Sequence[GroupSample], *, precision: int | None = None) -> ValidationReport:
    """Exact ``kappa`` bookkeeping for products of pure Heisenberg elements.

    ``(l1, m1, k1)(l2, m2, k2) = (l1 + l2, m1 + m2, k1 + k2 + l1 m2^T + m2 l1^T)``.
    """
    bits = resolve_precision(precision)
    worst = Fraction(0)
    lhs_text = rhs_text = ""
    for sample in batch:
        g1, g2 = sample.first, sample.second
        if g1.g != linalg.identity(2 * g1.n) or g2.g != linalg.identity(2 * g2.n):
            raise ValueError("Heisenberg samples must have trivial symplectic part")
        product = g1 * g2
        cross = linalg.matmul(g1.lam, linalg.transpose(g2.mu))
        expected = linalg.add(linalg.add(g1.kappa, g2.kappa), linalg.add(cross, linalg.transpose(cross)))
        diff = max(abs(x) for x in linalg.flatten(linalg.sub(product.kappa, expected)))
        if product.lam != linalg.add(g1.lam, g2.lam) or product.mu != linalg.add(g1.mu, g2.mu):
            diff = max(diff, Fraction(1))
        if diff >= worst:
            worst = diff
            lhs_text, rhs_text = linalg.format_matrix(product.kappa), linalg.format_matrix(expected)
    return ValidationReport(
        "heisenberg_law",
        {"count": len(batch)},
        lhs_text,
        rhs_text,
        worst,
        worst,
        bits,
        0.0,
    )


DEFAULT_GRIDS: Dict[str, Any] = {
    "int_det": [
        {"n": 1, "k": 3, "tau": 2},
        {"n": 1, "k": Fraction(5, 2), "tau": 1},
        {"n": 1, "k": 4, "tau": complex(1, 1)},
        {"n": 2, "k": 3, "tau": [[1, 0], [0, 1]]},
        {"n": 2, "k": Fraction(5, 2), "tau": [[2, Fraction(1, 2)], [Fraction(1, 2), 1]]},
    ],
    "cool_id": [
        {"l": 1, "n": 1, "S": [[1]], "R": [[0]], "A": [[1]], "a": 1},
        {"l": 1, "n": 1, "S": [[2]], "R": [[1]], "A": [[Fraction(1, 2)]], "a": 2},
        {"l": 1, "n": 1, "S": [[1]], "R": [[1]], "A": [[complex(1, 0.5)]], "a": 1},
        {"l": 2, "n": 1, "S": [[1, Fraction(1, 2)], [Fraction(1, 2), 1]], "R": [[1, -1]], "A": [[1]], "a": 1},
        {"l": 1, "n": 2, "S": [[1]], "R": [[1], [0]], "A": [[1, Fraction(1, 4)], [Fraction(1, 4), 1]], "a": 1},
        {"l": 2, "n": 2, "S": [[1, 0], [0, 2]], "R": [[1, 0], [0, Fraction(1, 2)]], "A": [[1, 0], [0, 1]], "a": Fraction(1, 2)},
    ],
    "cocycle": {"count": 50, "seed": 11},
    "delta_invariance": {"count": 50, "seed": 3},
    "heisenberg_law": {"count": 20, "seed": 7},
}


def grid_records() -> Dict[str, Any]:
    """``DEFAULT_GRIDS`` with exact and complex entries rendered as strings."""
    return {name: _jsonable(grid) for name, grid in DEFAULT_GRIDS.items()}


def run_grid(name: str, *, tolerance: float | None = None, precision: int | None = None) -> List[ValidationReport]:
    """Replay one shipped grid; ``tolerance`` only overrides the quadrature checks."""
    if name not in DEFAULT_GRIDS:
        raise ValueError(f"unknown grid '{name}', expected one of {sorted(DEFAULT_GRIDS)}")
    grid = DEFAULT_GRIDS[name]
    if name == "int_det":
        return [check_int_det(entry["n"], entry["k"], entry["tau"], tolerance=tolerance, precision=precision) for entry in grid]
    if name == "cool_id":
        return [
            check_cool_id(entry["l"], entry["n"], entry["S"], entry["R"], entry["A"], entry["a"], tolerance=tolerance, precision=precision)
            for entry in grid
        ]
    samples = random_group_samples(grid["count"], seed=grid["seed"], heisenberg_only=name == "heisenberg_law")
    if name == "cocycle":
        return [check_cocycle(samples, precision=precision)]
    if name == "delta_invariance":
        return [check_delta_invariance(samples, precision=precision)]
    return [check_heisenberg_law(samples, precision=precision)]
