"""Elements of the Jacobi group and the factor of automorphy."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Tuple

from mpmath import mp

from ..config import resolve_precision
from ..errors import DomainError
from ..numth.exact import to_fraction
from . import linalg
from .index import IndexMatrix
from .linalg import Matrix


def standard_form(n: int) -> Matrix:
    """``J = [[0, -1], [1, 0]]`` in ``n x n`` blocks."""
    size = 2 * n
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        rows[i][n + i] = Fraction(-1)
        rows[n + i][i] = Fraction(1)
    return tuple(tuple(row) for row in rows)


def _blocks(g: Matrix, n: int) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
    a = tuple(row[:n] for row in g[:n])
    b = tuple(row[n:] for row in g[:n])
    c = tuple(row[:n] for row in g[n:])
    d = tuple(row[n:] for row in g[n:])
    return a, b, c, d


def _symmetrize(m: Matrix) -> Matrix:
    return linalg.scale(linalg.add(m, linalg.transpose(m)), Fraction(1, 2))


@dataclass(frozen=True)
class JacobiPoint:
    """``(tau, w)`` with ``tau`` an ``n x n`` mp matrix and ``w`` an ``l x n`` mp matrix."""

    tau: Any
    w: Any

    @classmethod
    def of(cls, tau: Any, w: Any) -> "JacobiPoint":
        return cls(linalg.to_mp(tau), linalg.to_mp(w))

    @property
    def n(self) -> int:
        return self.tau.rows

    def y(self):
        return self.tau.apply(mp.im)

    def v(self):
        return self.w.apply(mp.im)


@dataclass(frozen=True)
class GroupElement:
    """``(lambda, mu, kappa) g`` with ``g`` symplectic of size ``2n``."""

    lam: Matrix
    mu: Matrix
    kappa: Matrix
    g: Matrix

    def __post_init__(self) -> None:
        n = len(self.g) // 2
        l = len(self.kappa)
        if linalg.shape(self.g) != (2 * n, 2 * n) or n == 0:
            raise ValueError("symplectic part must be a 2n x 2n matrix")
        if linalg.shape(self.lam) != (l, n) or linalg.shape(self.mu) != (l, n):
            raise ValueError("lambda and mu must be l x n")
        if not linalg.is_symmetric(self.kappa):
            raise ValueError("kappa must be symmetric")
        form = standard_form(n)
        if linalg.matmul(linalg.transpose(self.g), linalg.matmul(form, self.g)) != form:
            raise ValueError("g does not satisfy g^T J g = J")

    @classmethod
    def build(cls, *, g: Any = None, lam: Any = None, mu: Any = None, kappa: Any = None, n: int = 1, l: int = 1) -> "GroupElement":
        g_m = linalg.identity(2 * n) if g is None else linalg.as_matrix(g)
        n = len(g_m) // 2
        lam_m = linalg.zeros(l, n) if lam is None else linalg.as_matrix(lam, rows=l, cols=n)
        mu_m = linalg.zeros(l, n) if mu is None else linalg.as_matrix(mu, rows=l, cols=n)
        kappa_m = linalg.zeros(l, l) if kappa is None else linalg.as_matrix(kappa, rows=l, cols=l)
        return cls(lam_m, mu_m, kappa_m, g_m)

    @classmethod
    def identity(cls, n: int = 1, l: int = 1) -> "GroupElement":
        return cls.build(n=n, l=l)

    @property
    def n(self) -> int:
        return len(self.g) // 2

    @property
    def l(self) -> int:
        return len(self.kappa)

    def blocks(self) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
        return _blocks(self.g, self.n)

    def is_integral(self) -> bool:
        return all(linalg.is_integral(m) for m in (self.lam, self.mu, self.kappa, self.g))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        """Group law: conjugate the Heisenberg part of ``other`` past ``g``."""
        a, b, c, d = self.blocks()
        lam2, mu2 = other.lam, other.mu
        lam_t = linalg.sub(linalg.matmul(lam2, linalg.transpose(d)), linalg.matmul(mu2, linalg.transpose(c)))
        mu_t = linalg.sub(linalg.matmul(mu2, linalg.transpose(a)), linalg.matmul(lam2, linalg.transpose(b)))
        kappa = linalg.add(self.kappa, other.kappa)
        cross = linalg.add(linalg.matmul(self.lam, linalg.transpose(mu_t)), linalg.matmul(mu_t, linalg.transpose(self.lam)))
        twist = linalg.sub(linalg.matmul(lam_t, linalg.transpose(mu_t)), linalg.matmul(lam2, linalg.transpose(mu2)))
        kappa = linalg.add(linalg.add(kappa, cross), _symmetrize(twist))
        return GroupElement(
            linalg.add(self.lam, lam_t),
            linalg.add(self.mu, mu_t),
            kappa,
            linalg.matmul(self.g, other.g),
        )

    def act(self, z: JacobiPoint, *, precision: int | None = None) -> JacobiPoint:
        """``(g tau, w (c tau + d)^{-1} + lambda g tau + mu)``."""
        with mp.workprec(resolve_precision(precision)):
            a, b, c, d = (linalg.to_mp(m) for m in self.blocks())
            j = c * z.tau + d
            if abs(linalg.mp_det(j)) == 0:
                raise DomainError("c tau + d is singular")
            j_inv = linalg.mp_inverse(j)
            tau_new = (a * z.tau + b) * j_inv
            w_new = z.w * j_inv + linalg.to_mp(self.lam) * tau_new + linalg.to_mp(self.mu)
            return JacobiPoint(tau_new, w_new)


def in_theta_group(g: Matrix) -> bool:
    """True when ``a b^T`` and ``c d^T`` have even diagonals."""
    n = len(g) // 2
    a, b, c, d = _blocks(g, n)
    ab = linalg.matmul(a, linalg.transpose(b))
    cd = linalg.matmul(c, linalg.transpose(d))
    return all(ab[i][i] % 2 == 0 and cd[i][i] % 2 == 0 for i in range(n))


def _e(x):
    return mp.expjpi(2 * x)


def eval_J(k: Any, S: Any, gelt: GroupElement, z: JacobiPoint, *, precision: int | None = None):
    """Factor of automorphy ``J_{k,S}(gelt, z)``.

    Half-integral ``k`` is only supported on the theta group and returns
    ``|J|``.
    """
    k = to_fraction(k)
    S = IndexMatrix.of(S)
    half_integral = k.denominator == 2
    if half_integral and not in_theta_group(gelt.g):
        raise DomainError("half-integral weight requires g in the theta group")
    with mp.workprec(resolve_precision(precision)):
        a, b, c, d = (linalg.to_mp(m) for m in gelt.blocks())
        s = linalg.to_mp(S.rows)
        lam = linalg.to_mp(gelt.lam)
        kappa = linalg.to_mp(gelt.kappa)
        j = c * z.tau + d
        det_j = linalg.mp_det(j)
        if abs(det_j) == 0:
            raise DomainError("c tau + d is singular")
        j_inv = linalg.mp_inverse(j)
        g_tau = (a * z.tau + b) * j_inv
        phase = (
            -linalg.mp_trace(s * kappa)
            + linalg.mp_trace(z.w.T * s * z.w * j_inv * c)
            - 2 * linalg.mp_trace(lam.T * s * z.w * j_inv)
            - linalg.mp_trace(lam.T * s * lam * g_tau)
        )
        if half_integral:
            return mp.power(abs(det_j), k.numerator / mp.mpf(k.denominator)) * abs(_e(phase))
        return mp.power(det_j, int(k)) * _e(phase)


def delta(S: Any, k: Any, z: JacobiPoint, *, precision: int | None = None):
    """``Delta_{S,k}(z) = det(y)^k exp(-4 pi tr(S[v] y^{-1}))``."""
    S = IndexMatrix.of(S)
    k = to_fraction(k)
    with mp.workprec(resolve_precision(precision)):
        y = z.y()
        v = z.v()
        s = linalg.to_mp(S.rows)
        exponent = -4 * mp.pi * linalg.mp_trace(v.T * s * v * linalg.mp_inverse(y))
        return mp.power(linalg.mp_det(y), mp.mpf(k.numerator) / k.denominator) * mp.exp(exponent)


def _random_sl2(rng: random.Random, length: int) -> Matrix:
    """Random word in the generators ``T^m`` and ``J`` of SL2(Z)."""
    g = linalg.identity(2)
    s_gen = ((Fraction(0), Fraction(-1)), (Fraction(1), Fraction(0)))
    for _ in range(length):
        m = rng.choice([-2, -1, 1, 2])
        translation = ((Fraction(1), Fraction(m)), (Fraction(0), Fraction(1)))
        g = linalg.matmul(g, translation)
        if rng.random() < 0.7:
            g = linalg.matmul(g, s_gen)
    return g


def random_element(rng: random.Random, *, l: int = 1, word_length: int = 3, heisenberg_range: int = 2) -> GroupElement:
    """Random integral element of the degree-one Jacobi group."""
    def draw(rows: int, cols: int) -> Matrix:
        return tuple(tuple(Fraction(rng.randint(-heisenberg_range, heisenberg_range)) for _ in range(cols)) for _ in range(rows))

    kappa = draw(l, l)
    kappa = linalg.add(kappa, linalg.transpose(kappa))
    return GroupElement(draw(l, 1), draw(l, 1), kappa, _random_sl2(rng, word_length))


def random_point(rng: random.Random, *, n: int = 1, l: int = 1) -> JacobiPoint:
    """Random point with ``tau`` near the standard fundamental domain."""
    if n != 1:
        raise DomainError("random points are only drawn in degree one")
    x = mp.mpf(rng.uniform(-0.5, 0.5))
    y = mp.mpf(rng.uniform(0.8, 2.0))
    tau = mp.matrix([[mp.mpc(x, y)]])
    w = mp.matrix([[mp.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))] for _ in range(l)])
    return JacobiPoint(tau, w)
