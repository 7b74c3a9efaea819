from __future__ import annotations

import random
import unittest
from fractions import Fraction

import sympy
from mpmath import mp

from jacobiforms.errors import NonPositiveError, WeightBoundError
from jacobiforms.forms import IndexMatrix
from jacobiforms.forms import builders
from jacobiforms.numth.special import gamma_n
from jacobiforms.projection import (
    NearlyHolExpansion,
    SymPoly,
    brute_force_diff_oracle,
    coeff_integral_oracle,
    det_polynomial,
    hol_project,
    hol_project_improved,
    matrix_diff_apply,
)
from jacobiforms.projection.hol import coefficient_function, hol_coefficient
from jacobiforms.projection.polynomials import det_form_to_general, inverse_substitution


def falling(alpha: Fraction, m: int) -> Fraction:
    value = Fraction(1)
    for j in range(m):
        value *= alpha - j
    return value


def nearly(coefficients, *, k=12, n=1, S=1, cap=6, **extra):
    return NearlyHolExpansion(n=n, k=k, S=IndexMatrix.of(S), coefficients=coefficients, cap=cap, **extra)


class SymPolyTests(unittest.TestCase):
    def test_parse_and_format(self):
        p = SymPoly.parse("1;-3*u11", 1)
        self.assertEqual(p.terms, {(0,): Fraction(1), (1,): Fraction(-3)})
        self.assertEqual(p.format(), "1;-3*u11")
        q = SymPoly.parse("1/4*u12^2;-u11*u22", 2)
        self.assertEqual(SymPoly.parse(q.format(), 2), q)
        self.assertEqual(q.degree, 2)

    def test_symmetric_positions_share_a_variable(self):
        self.assertEqual(SymPoly.parse("u21", 2), SymPoly.variable(2, 0, 1))

    def test_signed(self):
        p = SymPoly.parse("2;u11;u11^2", 1)
        self.assertEqual(p.signed(), SymPoly.parse("2;-u11;u11^2", 1))

    def test_det_polynomial(self):
        self.assertEqual(det_polynomial(2), SymPoly.parse("d11*d22;-d12^2", 2, prefix="d"))
        self.assertEqual(det_polynomial(1), SymPoly.variable(1, 0, 0, prefix="d"))

    def test_inverse_substitution(self):
        p = SymPoly.variable(1, 0, 0)
        self.assertEqual(inverse_substitution(p, 1), SymPoly.constant(1, 1, prefix="y"))
        q = SymPoly.variable(2, 0, 0)
        # det(y) * (y^{-1})_11 = y22
        self.assertEqual(inverse_substitution(q, 1), SymPoly.variable(2, 1, 1, prefix="y"))

    def test_det_form_conversion(self):
        q = SymPoly.parse("3*y11", 1, prefix="y")
        self.assertEqual(det_form_to_general(q, 1), SymPoly.constant(1, 3))
        with self.assertRaises(ValueError):
            inverse_substitution(SymPoly.parse("u11^2", 1), 1)

    def test_evaluate(self):
        p = SymPoly.parse("u11*u22;-u12^2", 2)
        self.assertEqual(p.evaluate([[2, 1], [1, 3]]), 5)


class MatrixDiffTests(unittest.TestCase):
    def test_first_derivative(self):
        alpha = Fraction(7, 2)
        value = matrix_diff_apply(SymPoly.variable(1, 0, 0, prefix="d"), alpha, 3)
        self.assertEqual(value.coefficient, alpha)
        self.assertEqual(value.exponent, alpha - 1)
        signed = matrix_diff_apply(SymPoly.variable(1, 0, 0, prefix="d").signed(), alpha, 3)
        self.assertEqual(signed.coefficient, -alpha)

    def test_scalar_cayley_chain(self):
        rng = random.Random(17)
        for m in range(1, 7):
            R = SymPoly(1, {(m,): 1}, "d")
            for _ in range(20):
                alpha = Fraction(rng.randint(-40, 40), rng.choice([1, 2, 3]))
                h = Fraction(rng.randint(1, 30), rng.randint(1, 7))
                value = matrix_diff_apply(R, alpha, h)
                self.assertEqual(value.coefficient, falling(alpha, m))
                self.assertEqual(value.exponent, alpha - m)
                self.assertEqual(value.base, h)

    def test_cayley_identity_degree_two(self):
        alpha = Fraction(5, 2)
        h = [[2, 1], [1, 3]]
        value = matrix_diff_apply(det_polynomial(2), alpha, h)
        self.assertEqual(value.coefficient, alpha * (alpha + Fraction(1, 2)))
        self.assertEqual(value.exponent, alpha - 1)
        self.assertEqual(value.base, 5)
        self.assertEqual(brute_force_diff_oracle(det_polynomial(2), alpha, h), value.relative(alpha))

    def test_cayley_identity_degree_three(self):
        alpha = Fraction(3)
        h = [[2, 1, 0], [1, 2, 1], [0, 1, 2]]
        value = matrix_diff_apply(det_polynomial(3), alpha, h)
        expected = alpha * (alpha + Fraction(1, 2)) * (alpha + 1)
        self.assertEqual(value.coefficient, expected)
        self.assertEqual(value.exponent, alpha - 1)
        self.assertEqual(brute_force_diff_oracle(det_polynomial(3), alpha, h), value.relative(alpha))

    def test_mixed_operator_against_oracle(self):
        R = SymPoly.parse("d11^2;-2*d12;1/3*d22*d12", 2, prefix="d")
        h = [[3, 1], [1, 2]]
        for alpha in (Fraction(-9, 2), Fraction(2), Fraction(1, 2)):
            value = matrix_diff_apply(R, alpha, h)
            self.assertEqual(brute_force_diff_oracle(R, alpha, h), value.relative(alpha))

    def test_symbolic_alpha(self):
        h = [[2, 1], [1, 3]]
        symbolic = matrix_diff_apply(det_polynomial(2), None, h)
        self.assertTrue(symbolic.symbolic)
        alpha = sympy.Symbol("alpha")
        self.assertEqual(sympy.expand(symbolic.coefficient.as_expr() - alpha * (alpha + sympy.Rational(1, 2))), 0)
        concrete = symbolic.at(Fraction(5, 2))
        self.assertEqual(concrete.coefficient, Fraction(15, 2))
        self.assertEqual(concrete.exponent, Fraction(3, 2))

    def test_rejects_non_positive_h(self):
        with self.assertRaises(NonPositiveError):
            matrix_diff_apply(det_polynomial(2), 1, [[1, 1], [1, 1]])
        with self.assertRaises(NonPositiveError):
            matrix_diff_apply(SymPoly.variable(1, 0, 0, prefix="d"), 1, -2)


class HolProjectionTests(unittest.TestCase):
    def test_holomorphic_input_is_fixed(self):
        f = builders.phi10(4)
        projected = hol_project(NearlyHolExpansion.from_holomorphic(f))
        self.assertEqual(projected.coefficients, f.coefficients)
        self.assertTrue(projected.cuspidal)

    def test_single_linear_coefficient(self):
        f = nearly({(1, 0): SymPoly.variable(1, 0, 0)})
        projected = hol_project(f)
        self.assertEqual(projected.coefficient(1, 0), Fraction(8, 19))

    def test_closed_form_against_quadrature(self):
        p = SymPoly.variable(1, 0, 0)
        with mp.workprec(192):
            oracle = coeff_integral_oracle(coefficient_function(p, 1), 12, 1, 1, 0, precision=192, normalized=True)
            self.assertLess(abs(oracle - mp.mpf(8) / 19), mp.mpf(10) ** -20)

    def test_raw_integral(self):
        with mp.workprec(192):
            A = lambda y: mp.exp(-2 * mp.pi * y)
            value = coeff_integral_oracle(A, 12, 1, 1, 0, precision=192)
            a = mp.mpf(21) / 2
            expected = mp.gamma(a) * mp.power(4 * mp.pi, -a)
            self.assertLess(abs(value / expected - 1), mp.mpf(10) ** -20)
            self.assertEqual(coeff_integral_oracle(lambda y: mp.mpf(0), 12, 1, 1, 0, precision=192), 0)

    def test_random_oracle_agreement(self):
        rng = random.Random(29)
        S = IndexMatrix.of(1)
        with mp.workprec(192):
            for i in range(10):
                degree = 1 + i % 3
                p = SymPoly(1, {(e,): rng.randint(-5, 5) for e in range(degree)} | {(degree,): rng.randint(1, 5)}, "u")
                k = rng.randint(12, 20)
                t = rng.randint(1, 4)
                r = rng.randint(-1, 1)
                h = 4 * t - r * r
                exact = hol_coefficient(p, k=k, l=1, h=h)
                numeric = coeff_integral_oracle(coefficient_function(p, t), k, 1, t, r, S=S, precision=192, normalized=True)
                self.assertLess(abs(numeric - mp.mpf(exact.numerator) / exact.denominator), mp.mpf(10) ** -20 * max(1, abs(numeric)))

    def test_weight_bound(self):
        f = nearly({(1, 0): SymPoly.variable(1, 0, 0)}, k=3)
        with self.assertRaises(WeightBoundError):
            hol_project(f)

    def test_non_positive_indices(self):
        f = nearly({(1, 2): SymPoly.constant(1, 1), (1, 0): SymPoly.constant(1, 1)})
        self.assertEqual(len(hol_project(f)), 1)
        with self.assertRaises(NonPositiveError):
            hol_project(f, strict=True)

    def test_gamma_ratio_is_rational(self):
        # Gamma(a-1)/Gamma(a) with a = 21/2, checked against the structured values.
        ratio = gamma_n(1, Fraction(19, 2)) / gamma_n(1, Fraction(21, 2))
        self.assertEqual(ratio.as_rational(), Fraction(2, 19))


class ImprovedProjectionTests(unittest.TestCase):
    def test_zero_exponent_matches_holomorphic(self):
        f = builders.phi10(3)
        det_form = nearly(
            {key: SymPoly.constant(1, c, prefix="y") for key, c in f.items()},
            k=10,
            cap=3,
            det_form=True,
            det_exponent=0,
        )
        self.assertEqual(hol_project_improved(det_form).coefficients, f.coefficients)

    def test_scalar_path_equivalence(self):
        det_form = nearly({(1, 0): SymPoly.parse("3*y11", 1, prefix="y"), (2, 1): SymPoly.parse("1;y11", 1, prefix="y")}, det_form=True, det_exponent=1)
        improved = hol_project(det_form)
        general = hol_project(det_form.as_general())
        self.assertEqual(improved.coefficients, general.coefficients)
        self.assertEqual(improved.coefficient(1, 0), 3)

    def test_degree_two_path_equivalence(self):
        key = (((1, 0), (0, 1)), ((0, 0),))
        det_form = nearly({key: SymPoly.parse("2;y11", 2, prefix="y")}, k=6, n=2, det_form=True, det_exponent=1)
        self.assertEqual(det_form.degree_bound, 2)
        improved = hol_project_improved(det_form)
        general = hol_project(det_form.as_general())
        self.assertEqual(improved.coefficients, general.coefficients)
        self.assertEqual(len(improved), 1)

    def test_boundary_weight(self):
        det_form = nearly({}, k=Fraction(7, 2), det_form=True, det_exponent=2)
        with self.assertRaises(WeightBoundError):
            hol_project_improved(det_form)


if __name__ == "__main__":
    unittest.main()
