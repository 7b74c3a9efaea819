from __future__ import annotations

import random
import unittest
from fractions import Fraction

from mpmath import mp

from jacobiforms.errors import DomainError, InconsistencyError
from jacobiforms.forms import (
    GroupElement,
    IndexMatrix,
    JacobiExpansion,
    JacobiPoint,
    ThetaComponents,
    delta,
    eval_J,
    evaluate,
    f_star_evaluate,
    growth_profile,
    is_cuspidal,
    property_A_check,
    theta_decompose,
    theta_pairing_factor,
    theta_reconstruct,
    theta_series,
)
from jacobiforms.forms import builders
from jacobiforms.forms.evaluate import halton_points
from jacobiforms.forms.group import random_element, random_point
from jacobiforms.forms.theta import round_trip_report, theta_classes


def single(t, r, c, *, k=12, cap=6, cuspidal=True):
    return JacobiExpansion(n=1, k=k, S=IndexMatrix.of(1), coefficients={(t, r): c}, cap=cap, cuspidal=cuspidal)


class IndexMatrixTests(unittest.TestCase):
    def test_half_integral_positive_definite(self):
        S = IndexMatrix.of([[1, Fraction(1, 2)], [Fraction(1, 2), 1]])
        self.assertEqual(S.det, Fraction(3, 4))
        self.assertEqual(S.det_2s, 3)
        self.assertFalse(S.is_diagonal)

    def test_rejects_bad_matrices(self):
        with self.assertRaises(ValueError):
            IndexMatrix.of([[1, 0], [0, -1]])
        with self.assertRaises(ValueError):
            IndexMatrix.of([[1, Fraction(1, 3)], [Fraction(1, 3), 1]])
        with self.assertRaises(ValueError):
            IndexMatrix.of([[Fraction(1, 2)]])


class ExpansionTests(unittest.TestCase):
    def test_support_invariant_rejects_construction(self):
        with self.assertRaises(ValueError):
            single(0, 1, 1, cuspidal=False)
        with self.assertRaises(ValueError):
            single(1, 2, 1)

    def test_zero_coefficients_are_dropped(self):
        f = single(1, 0, 0)
        self.assertTrue(f.is_zero)

    def test_trace_cap_enforced(self):
        with self.assertRaises(ValueError):
            single(7, 0, 1)

    def test_addition_takes_minimum_cap(self):
        total = single(5, 0, 1, cap=6) + single(1, 0, 2, cap=4)
        self.assertEqual(total.cap, 4)
        self.assertEqual(total.coefficient(1, 0), 2)
        self.assertEqual(len(total), 1)


class ThetaSeriesTests(unittest.TestCase):
    def test_theta_zero_characteristic(self):
        theta = theta_series(1, cap=6)
        expected = {(m * m, 2 * m) for m in range(-2, 3)}
        found = {(t[0][0], r[0][0]) for (t, r), _ in theta.items()}
        self.assertEqual(found, expected)
        self.assertTrue(all(c == 1 for _, c in theta.items()))
        self.assertEqual(theta.k, Fraction(1, 2))

    def test_theta_odd_characteristic(self):
        theta = theta_series(1, h=1, cap=6)
        found = {(t[0][0], r[0][0]) for (t, r), _ in theta.items()}
        self.assertEqual(found, {(Fraction(1, 4), 1), (Fraction(1, 4), -1), (Fraction(9, 4), 3), (Fraction(9, 4), -3)})

    def test_cap_zero(self):
        theta = theta_series(1, cap=0)
        self.assertEqual(len(theta), 1)
        self.assertEqual(theta.coefficient(0, 0), 1)
        self.assertTrue(theta_series(1, h=1, cap=0).is_zero)

    def test_theta_support_is_degenerate(self):
        S = IndexMatrix.of([[1, 0], [0, 2]])
        theta = theta_series(S, h=[0, 1], cap=5)
        self.assertFalse(theta.is_zero)
        for (t, r), _ in theta.items():
            self.assertEqual(4 * t[0][0], S.inverse_form(r)[0][0])
        self.assertFalse(is_cuspidal(theta))

    def test_non_integral_r_rejected(self):
        with self.assertRaises(ValueError):
            theta_series(1, h=Fraction(1, 2), cap=2)

    def test_classes(self):
        self.assertEqual(len(theta_classes(IndexMatrix.of(1))), 2)
        self.assertEqual(len(theta_classes(IndexMatrix.of([[1, 0], [0, 2]]))), 8)


class ThetaDecompositionTests(unittest.TestCase):
    def test_theta_decomposes_over_itself(self):
        tc = theta_decompose(theta_series(1, cap=6))
        self.assertEqual(tc.class_count, 2)
        self.assertEqual(tc.component(0), {((Fraction(0),),): Fraction(1)})
        self.assertEqual(tc.component(1), {})
        self.assertEqual(tc.weight, 0)

    def test_single_coefficient(self):
        tc = theta_decompose(single(1, 0, 5))
        self.assertEqual(tc.component(0), {((Fraction(1),),): Fraction(5)})
        self.assertEqual(tc.component(1), {})

    def test_inconsistent_coefficients(self):
        f = JacobiExpansion(n=1, k=12, S=IndexMatrix.of(1), coefficients={(1, 0): 5, (2, 2): 3}, cap=6, cuspidal=True)
        with self.assertRaises(InconsistencyError):
            theta_decompose(f)

    def test_reconstruct_from_single_component(self):
        S = IndexMatrix.of(1)
        tc = ThetaComponents(n=1, S=S, weight=Fraction(23, 2), components={((Fraction(0),),): {((Fraction(1),),): 1}}, cap=6)
        f = theta_reconstruct(tc)
        self.assertEqual(len(f), 5)
        for (t, r), c in f.items():
            self.assertEqual(c, 1)
            self.assertEqual(4 * t[0][0] - r[0][0] ** 2, 4)
            self.assertEqual(r[0][0] % 2, 0)
        self.assertEqual(f.k, 12)

    def test_reconstruct_zero(self):
        tc = ThetaComponents(n=1, S=IndexMatrix.of(1), weight=10, components={}, cap=6)
        self.assertTrue(theta_reconstruct(tc).is_zero)

    def test_round_trip_on_cusp_form(self):
        report = round_trip_report(builders.phi10(4))
        self.assertTrue(report["exact"])
        self.assertTrue(report["periodic"])

    def test_round_trip_on_truncated_input(self):
        report = round_trip_report(single(1, 0, 5))
        self.assertTrue(report["exact"])
        self.assertEqual(report["extra"], 4)

    def test_round_trip_on_two_variable_index(self):
        S = IndexMatrix.of([[1, 0], [0, 2]])
        theta = theta_series(S, h=[1, 0], cap=4)
        self.assertTrue(round_trip_report(theta)["exact"])


class PropertyATests(unittest.TestCase):
    def test_single_coefficient_passes(self):
        report = property_A_check(single(1, 0, 5))
        self.assertTrue(is_cuspidal(single(1, 0, 5)))
        self.assertTrue(report["passed"])
        self.assertTrue(report["complete"])
        self.assertEqual(report["classes"], 2)
        self.assertEqual(report["nonzero_classes"], 1)

    def test_theta_fails(self):
        report = property_A_check(theta_series(1, cap=4))
        self.assertFalse(report["passed"])

    def test_zero_form(self):
        zero = JacobiExpansion(n=1, k=10, S=IndexMatrix.of(1), coefficients={}, cap=4)
        self.assertTrue(is_cuspidal(zero))
        self.assertTrue(property_A_check(zero)["passed"])

    def test_higher_level_is_flagged_incomplete(self):
        f = single(1, 0, 5).replace(level=4)
        self.assertFalse(property_A_check(f)["complete"])

    def test_pairing_factor(self):
        self.assertEqual(theta_pairing_factor(1).as_rational(), Fraction(1, 2))
        self.assertEqual(theta_pairing_factor([[1, 0], [0, 1]], 2).as_rational(), Fraction(1, 16))


class GroupTests(unittest.TestCase):
    def setUp(self):
        self.z = JacobiPoint.of(mp.mpc(0.1, 1.2), mp.mpc(0.3, 0.2))

    def test_identity_is_trivial(self):
        value = eval_J(12, 1, GroupElement.identity(), self.z)
        self.assertLess(abs(value - 1), mp.mpf(10) ** -30)

    def test_translation_is_trivial(self):
        g = GroupElement.build(g=[[1, 1], [0, 1]])
        value = eval_J(12, 1, g, self.z)
        self.assertLess(abs(value - 1), mp.mpf(10) ** -30)

    def test_rejects_non_symplectic(self):
        with self.assertRaises(ValueError):
            GroupElement.build(g=[[2, 0], [0, 1]])

    def test_half_integral_weight_needs_theta_group(self):
        g = GroupElement.build(g=[[1, 1], [0, 1]])
        with self.assertRaises(DomainError):
            eval_J(Fraction(1, 2), 1, g, self.z)
        value = eval_J(Fraction(1, 2), 1, GroupElement.build(g=[[1, 2], [0, 1]]), self.z)
        self.assertLess(abs(value - 1), mp.mpf(10) ** -30)

    def test_cocycle(self):
        rng = random.Random(11)
        with mp.workprec(128):
            for _ in range(20):
                g1 = random_element(rng)
                g2 = random_element(rng)
                z = random_point(rng)
                left = eval_J(12, 1, g1 * g2, z, precision=128)
                right = eval_J(12, 1, g1, g2.act(z, precision=128), precision=128) * eval_J(12, 1, g2, z, precision=128)
                self.assertLess(abs(left - right), mp.mpf(10) ** -20 * max(1, abs(left)))

    def test_action_composes(self):
        rng = random.Random(5)
        with mp.workprec(128):
            g1, g2, z = random_element(rng), random_element(rng), random_point(rng)
            once = (g1 * g2).act(z)
            twice = g1.act(g2.act(z))
            self.assertLess(abs(once.tau[0, 0] - twice.tau[0, 0]), mp.mpf(10) ** -25)
            self.assertLess(abs(once.w[0, 0] - twice.w[0, 0]), mp.mpf(10) ** -25)

    def test_delta_invariance(self):
        rng = random.Random(3)
        with mp.workprec(128):
            for _ in range(10):
                g, z = random_element(rng), random_point(rng)
                left = delta(1, 12, g.act(z))
                right = delta(1, 12, z) / abs(eval_J(12, 1, g, z)) ** 2
                self.assertLess(abs(left - right), mp.mpf(10) ** -20 * right)


class EvaluateTests(unittest.TestCase):
    def test_zero_form(self):
        zero = JacobiExpansion(n=1, k=10, S=IndexMatrix.of(1), coefficients={}, cap=4)
        self.assertEqual(evaluate(zero, 1j, 0), 0)

    def test_theta_value_at_i(self):
        with mp.workprec(128):
            value = evaluate(theta_series(1, cap=6), 1j, 0, precision=128)
            expected = mp.jtheta(3, 0, mp.exp(-2 * mp.pi))
            self.assertLess(abs(value - expected), mp.mpf(10) ** -20)

    def test_periodicity(self):
        f = builders.phi10(6)
        with mp.workprec(128):
            tau = mp.mpc("0.13", "0.9")
            w = mp.mpc("0.2", "0.1")
            self.assertLess(abs(evaluate(f, tau + 1, w) - evaluate(f, tau, w)), mp.mpf(10) ** -25)

    def test_truncation_warning(self):
        with self.assertLogs("jacobiforms.forms.evaluate", level="WARNING"):
            evaluate(theta_series(1, cap=1), mp.mpc(0, "0.1"), 0)

    def test_f_star_at_zero_shift(self):
        f = builders.phi10(4)
        with mp.workprec(128):
            tau = mp.mpc("0.1", "1.1")
            star = f_star_evaluate(f, tau, [[0, 0]])
            plain = evaluate(f, tau, 0)
            self.assertLess(abs(star - plain), mp.mpf(10) ** -30)

    def test_growth_zero_form(self):
        zero = JacobiExpansion(n=1, k=10, S=IndexMatrix.of(1), coefficients={}, cap=4)
        self.assertEqual(growth_profile(zero, 8)["sup"], 0)

    def test_growth_theta_is_stable(self):
        theta = theta_series(1, cap=6)
        small = growth_profile(theta, 64, y_max=1.5, precision=64)
        large = growth_profile(theta, 128, y_max=1.5, precision=64)
        self.assertGreaterEqual(large["sup"], small["sup"])
        self.assertLess(large["sup"], small["sup"] * mp.mpf("1.1"))

    def test_halton_sample_is_nested(self):
        small = halton_points(16, 4)
        large = halton_points(64, 4)
        self.assertEqual(large[:16], small)
        self.assertEqual(small[0], [0.5, 1 / 3, 0.2, 1 / 7])
        self.assertTrue(all(0 <= c < 1 for point in large for c in point))

    def test_growth_cusp_form_is_finite(self):
        profile = growth_profile(builders.phi10(4), 32, precision=64)
        self.assertTrue(mp.isfinite(profile["sup"]))
        self.assertGreater(profile["sup"], 0)


class BuilderTests(unittest.TestCase):
    def test_eisenstein_coefficients(self):
        e4 = builders.eisenstein_series(4, 3)
        self.assertEqual([e4[m] for m in range(4)], [1, 240, 2160, 6720])
        e2 = builders.eisenstein_series(2, 2)
        self.assertEqual([e2[m] for m in range(3)], [1, -24, -72])
        self.assertEqual(builders.eisenstein_series(6, 1)[1], -504)

    def test_discriminant(self):
        d = builders.discriminant_series(3)
        self.assertEqual([d[m] for m in range(4)], [0, 1, -24, 252])

    def test_phi10_coefficients(self):
        f = builders.phi10(2)
        self.assertTrue(f.cuspidal)
        expected = {(1, 1): 1, (1, 0): -2, (1, -1): 1, (2, 2): -2, (2, 1): -16, (2, 0): 36, (2, -1): -16, (2, -2): -2}
        for (t, r), c in expected.items():
            self.assertEqual(f.coefficient(t, r), c)
        self.assertEqual(len(f), len(expected))

    def test_product_with_q_series(self):
        g = builders.times(builders.eisenstein_series(4, 2), builders.phi10(2))
        self.assertEqual(g.k, 14)
        self.assertEqual(g.coefficient(1, 0), -2)
        self.assertEqual(g.coefficient(2, 0), 36 + 240 * -2)

    def test_e2star_multiplier(self):
        g = builders.e2star_times(builders.phi10(2))
        p = g.coefficients[(((Fraction(1),),), ((Fraction(0),),))]
        self.assertEqual(p.terms, {(0,): Fraction(-2), (1,): Fraction(6)})
        self.assertEqual(g.k, 12)


if __name__ == "__main__":
    unittest.main()
