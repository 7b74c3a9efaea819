from __future__ import annotations

import math
import random
import unittest
from fractions import Fraction

from mpmath import mp

from jacobiforms.errors import NonRationalRatioError, PoleError
from jacobiforms.numth import (
    DirichletCharacter,
    ExactProduct,
    dirichlet_L,
    dirichlet_L_depleted,
    gamma_n,
    gamma_n_ratio,
    kronecker_symbol,
    psi_S,
    rational_recognize,
)
from jacobiforms.numth.recognize import convergents, recognition_report


class ExactProductTests(unittest.TestCase):
    def test_integral_radical_exponents_fold_into_coefficient(self):
        root_two = ExactProduct.power(2, Fraction(1, 2))
        self.assertEqual(root_two * root_two, ExactProduct.rational(2))
        self.assertTrue((root_two * root_two).is_rational)

    def test_division_and_symbols(self):
        value = ExactProduct.build(3, pi_exponent=1, symbols={"vol": -1})
        ratio = value / ExactProduct.build(3, pi_exponent=1)
        self.assertEqual(ratio.symbols, (("vol", -1),))
        with mp.workprec(128):
            self.assertAlmostEqual(float(ratio.numeric(128, symbols={"vol": 4})), 0.25)

    def test_numeric_requires_symbol_values(self):
        with self.assertRaises(ValueError):
            ExactProduct.build(1, symbols={"vol": 1}).numeric(128)

    def test_string_form(self):
        value = ExactProduct.build(Fraction(3, 4), pi_exponent=Fraction(1, 2), radicals=[(3, Fraction(1, 2))])
        self.assertEqual(str(value), "3/4 * pi^(1/2) * (3)^(1/2)")

    def test_negative_radical_exponent_is_normalized(self):
        value = ExactProduct.power(2, Fraction(-3, 2))
        self.assertEqual(value.coefficient, Fraction(1, 4))
        self.assertEqual(value.radicals, ((Fraction(2), Fraction(1, 2)),))


class GammaTests(unittest.TestCase):
    def test_degree_one_is_factorial(self):
        for k in range(1, 9):
            value = gamma_n(1, k)
            self.assertEqual(value.as_rational(), Fraction(math.factorial(k - 1)))

    def test_degree_two_at_two(self):
        value = gamma_n(2, 2)
        self.assertEqual(value.coefficient, Fraction(1, 2))
        self.assertEqual(value.pi_exponent, Fraction(1))

    def test_pole(self):
        with self.assertRaises(PoleError):
            gamma_n(2, Fraction(1, 2))
        with self.assertRaises(PoleError):
            gamma_n(1, 0)

    def test_negative_half_integer(self):
        # Gamma(-1/2) = -2 sqrt(pi)
        value = gamma_n(1, Fraction(-1, 2))
        self.assertEqual(value.coefficient, Fraction(-2))
        self.assertEqual(value.pi_exponent, Fraction(1, 2))

    def test_functional_equation(self):
        rng = random.Random(7)
        for _ in range(20):
            n = rng.randint(1, 4)
            x = Fraction(rng.randint(2 * n, 40), 2)
            ratio = (gamma_n(n, x + 1) / gamma_n(n, x)).as_rational()
            expected = Fraction(1)
            for i in range(n):
                expected *= x - Fraction(i, 2)
            self.assertEqual(ratio, expected)

    def test_numeric_argument(self):
        x = Fraction(1, 3)
        with mp.workprec(128):
            expected = mp.sqrt(mp.pi) * mp.gamma(mp.mpf(1) / 3) * mp.gamma(mp.mpf(1) / 3 - mp.mpf(1) / 2)
            value = gamma_n(2, x, precision=128)
            self.assertLess(abs(value - expected), mp.mpf(10) ** -30)

    def test_ratio_values(self):
        self.assertEqual(gamma_n_ratio(1, 5, 3), Fraction(12))
        self.assertEqual(gamma_n_ratio(1, Fraction(7, 2), Fraction(3, 2)), Fraction(15, 4))
        self.assertEqual(gamma_n_ratio(2, 4, 3), Fraction(15, 2))
        self.assertEqual(gamma_n_ratio(2, Fraction(7, 2), 3), Fraction(5, 2))

    def test_ratio_inverse(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(1, 3)
            a = Fraction(rng.randint(2 * n, 30), 2)
            b = a - rng.randint(-4, 4)
            if b <= Fraction(n - 1, 2):
                continue
            self.assertEqual(gamma_n_ratio(n, a, b) * gamma_n_ratio(n, b, a), 1)

    def test_ratio_matches_exact_gamma(self):
        a, b = Fraction(21, 2), Fraction(17, 2)
        exact = (gamma_n(3, a) / gamma_n(3, b)).as_rational()
        self.assertEqual(gamma_n_ratio(3, a, b), exact)

    def test_ratio_rejects_unpaired_factors(self):
        with self.assertRaises(NonRationalRatioError):
            gamma_n_ratio(1, Fraction(5, 2), 2)

    def test_ratio_pole(self):
        with self.assertRaises(PoleError):
            gamma_n_ratio(1, 0, 3)


class DirichletLTests(unittest.TestCase):
    def setUp(self):
        self.trivial = DirichletCharacter.principal(1)
        self.chi_m4 = DirichletCharacter.kronecker(-4)

    def test_zeta_two(self):
        with mp.workprec(128):
            value = dirichlet_L(2, self.trivial, precision=128)
            self.assertLess(abs(value - mp.pi ** 2 / 6), mp.mpf(10) ** -35)

    def test_bernoulli_values(self):
        self.assertEqual(dirichlet_L(0, self.chi_m4), Fraction(1, 2))
        self.assertEqual(dirichlet_L(0, self.trivial), Fraction(-1, 2))
        self.assertEqual(dirichlet_L(-1, self.trivial), Fraction(-1, 12))
        self.assertEqual(dirichlet_L(-1, self.chi_m4), Fraction(0))
        self.assertEqual(dirichlet_L(-2, self.chi_m4), Fraction(-1, 2))

    def test_bernoulli_agrees_with_hurwitz(self):
        with mp.workprec(128):
            for s in (-1, -2, -3, -4, -5):
                exact = dirichlet_L(s, self.chi_m4)
                numeric = dirichlet_L(mp.mpf(s), self.chi_m4, precision=128)
                self.assertLess(abs(numeric - mp.mpf(exact.numerator) / exact.denominator), mp.mpf(10) ** -20)

    def test_pole_at_one(self):
        with self.assertRaises(PoleError):
            dirichlet_L(1, DirichletCharacter.principal(4))

    def test_value_at_one_for_nonprincipal(self):
        with mp.workprec(128):
            value = dirichlet_L(1, self.chi_m4, precision=128)
            self.assertLess(abs(value - mp.pi / 4), mp.mpf(10) ** -30)

    def test_depleted(self):
        with mp.workprec(128):
            self.assertLess(abs(dirichlet_L_depleted(2, self.trivial, 1) - mp.pi ** 2 / 6), mp.mpf(10) ** -30)
            self.assertLess(abs(dirichlet_L_depleted(2, self.trivial, 2) - mp.pi ** 2 / 8), mp.mpf(10) ** -30)
        self.assertEqual(dirichlet_L_depleted(0, self.chi_m4, 3), Fraction(1))


class CharacterTests(unittest.TestCase):
    def test_kronecker_eight(self):
        chi = DirichletCharacter.kronecker(8)
        self.assertEqual([chi.exact_value(a) for a in (1, 3, 5, 7)], [1, -1, -1, 1])
        self.assertEqual(chi.exact_value(2), 0)
        self.assertEqual(chi.parity, 1)

    def test_kronecker_symbol_two_part(self):
        self.assertEqual(kronecker_symbol(5, 2), -1)
        self.assertEqual(kronecker_symbol(-7, 2), 1)
        self.assertEqual(kronecker_symbol(-4, 3), -1)

    def test_angles_character(self):
        chi = DirichletCharacter.from_angles(5, [None, 0, Fraction(1, 4), Fraction(3, 4), Fraction(1, 2)])
        self.assertFalse(chi.is_real)
        self.assertIsNone(chi.exact_value(2))
        self.assertEqual(chi.exact_value(4), -1)
        self.assertTrue(chi.square().is_real)

    def test_describe_parse(self):
        angles = DirichletCharacter.from_angles(5, [None, 0, Fraction(1, 4), Fraction(3, 4), Fraction(1, 2)])
        for chi in (DirichletCharacter.kronecker(-4), DirichletCharacter.principal(3), angles):
            self.assertEqual(DirichletCharacter.parse(chi.describe()).angles, chi.angles)
        self.assertTrue(DirichletCharacter.parse("1").is_principal)
        with self.assertRaises(ValueError):
            DirichletCharacter.parse("legendre:5")

    def test_rejects_non_multiplicative_table(self):
        with self.assertRaises(ValueError):
            DirichletCharacter.from_angles(5, [None, 0, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)])

    def test_psi_s_values(self):
        self.assertEqual(psi_S(((1,),)).discriminant, 8)
        identity = psi_S(((1, 0), (0, 1)))
        self.assertEqual(identity.discriminant, -4)
        self.assertTrue(identity.branches_agree)
        self.assertTrue(psi_S(((2,),)).is_principal)
        self.assertTrue(psi_S(((1, 0, 0), (0, 1, 0), (0, 0, 2))).is_principal)

    def test_psi_s_squared_is_principal(self):
        rng = random.Random(11)
        for rows in (((1,),), ((1, 0), (0, 1)), ((1, Fraction(1, 2)), (Fraction(1, 2), 1)), ((3,),)):
            chi = psi_S(rows).character
            square = chi.square()
            for _ in range(100):
                a = rng.randint(1, 10 ** 6)
                self.assertIn(square.exact_value(a), (0, 1))


class RecognizeTests(unittest.TestCase):
    def test_half(self):
        with mp.workprec(128):
            self.assertEqual(rational_recognize(mp.mpf("0.5"), 10, precision=128), Fraction(1, 2))

    def test_pi_is_not_recognized(self):
        with mp.workprec(128):
            self.assertIsNone(rational_recognize(+mp.pi, 1000, precision=128))

    def test_noisy_convergent(self):
        with mp.workprec(128):
            x = mp.mpf(355) / 113 + mp.mpf(10) ** -30
            self.assertEqual(rational_recognize(x, 1000, precision=128), Fraction(355, 113))

    def test_idempotent(self):
        first = Fraction(355, 113)
        self.assertEqual(rational_recognize(first, 1000, precision=128), first)

    def test_imaginary_part_rejects(self):
        with mp.workprec(128):
            self.assertIsNone(rational_recognize(mp.mpc(0.5, 0.1), 10, precision=128))

    def test_convergents(self):
        self.assertEqual(list(convergents(Fraction(355, 113))), [3, Fraction(22, 7), Fraction(333, 106), Fraction(355, 113)])

    def test_report(self):
        report = recognition_report(Fraction(0), 10, precision=128)
        self.assertEqual(report["candidate"], "0")
        self.assertEqual(report["height"], 1)


if __name__ == "__main__":
    unittest.main()
