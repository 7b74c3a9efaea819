from __future__ import annotations

import json
import unittest
from fractions import Fraction

from mpmath import mp

from jacobiforms.errors import DomainError, NonPositiveError
from jacobiforms.forms.group import GroupElement
from jacobiforms.identities import (
    DEFAULT_GRIDS,
    GroupSample,
    ValidationReport,
    check_cocycle,
    check_cool_id,
    check_delta_invariance,
    check_heisenberg_law,
    check_int_det,
    grid_records,
    random_group_samples,
    run_grid,
)

PRECISION = 64


class ValidationReportTests(unittest.TestCase):
    def test_passed_follows_tolerance(self):
        report = ValidationReport("x", {}, mp.mpf(1), mp.mpf(1), mp.mpf(0), mp.mpf("1e-9"), 64, 1e-8)
        self.assertTrue(report.passed)
        failing = ValidationReport("x", {}, mp.mpf(1), mp.mpf(2), mp.mpf(1), mp.mpf("0.5"), 64, 1e-8)
        self.assertFalse(failing.passed)

    def test_record_is_json(self):
        report = check_int_det(1, 3, 2, precision=PRECISION)
        record = report.as_record()
        self.assertEqual(json.loads(json.dumps(record))["identity"], "int_det")
        self.assertTrue(record["passed"])


class IntDetTests(unittest.TestCase):
    def test_scalar_integer_weight(self):
        report = check_int_det(1, 3, 2, precision=PRECISION)
        self.assertEqual(report.parameters["exact_rhs"], "1/4")
        self.assertTrue(report.passed)

    def test_scalar_half_integral_weight(self):
        report = check_int_det(1, Fraction(5, 2), 1, precision=PRECISION)
        self.assertEqual(report.parameters["exact_rhs"], "3/4 * pi^(1/2)")
        self.assertTrue(report.passed)

    def test_scalar_complex_tau(self):
        self.assertTrue(check_int_det(1, 4, complex(1, 1), precision=PRECISION).passed)

    def test_degree_two_identity(self):
        report = check_int_det(2, 3, [[1, 0], [0, 1]], precision=PRECISION)
        with mp.workprec(PRECISION):
            self.assertLess(abs(report.rhs - 3 * mp.pi / 2), mp.mpf(10) ** -15)
        self.assertLessEqual(report.rel_error, 1e-8)

    def test_degree_two_off_diagonal(self):
        tau = [[2, Fraction(1, 2)], [Fraction(1, 2), 1]]
        self.assertTrue(check_int_det(2, Fraction(5, 2), tau, precision=PRECISION).passed)

    def test_domain(self):
        with self.assertRaises(DomainError):
            check_int_det(3, 4, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        with self.assertRaises(DomainError):
            check_int_det(2, Fraction(1, 2), [[1, 0], [0, 1]])
        with self.assertRaises(NonPositiveError):
            check_int_det(1, 2, -1)


class GaussianIdentityTests(unittest.TestCase):
    def test_one_dimensional(self):
        report = check_cool_id(1, 1, [[1]], [[0]], [[1]], 1, precision=PRECISION)
        with mp.workprec(PRECISION):
            self.assertLess(abs(report.rhs - mp.sqrt(mp.pi)), mp.mpf(10) ** -15)
        self.assertTrue(report.passed)

    def test_linear_term(self):
        report = check_cool_id(1, 1, [[2]], [[1]], [[Fraction(1, 2)]], 2, precision=PRECISION)
        with mp.workprec(PRECISION):
            # completing the square in -2x^2 + x: sqrt(pi/2) e^{1/8}
            self.assertLess(abs(report.rhs - mp.sqrt(mp.pi / 2) * mp.exp(mp.mpf(1) / 8)), mp.mpf(10) ** -15)
        self.assertTrue(report.passed)

    def test_zero_shift_has_no_exponential(self):
        report = check_cool_id(2, 1, [[1, 0], [0, 2]], [[0, 0]], [[1]], 1, precision=PRECISION)
        with mp.workprec(PRECISION):
            self.assertLess(abs(report.rhs - mp.pi / mp.sqrt(2)), mp.mpf(10) ** -15)
        self.assertTrue(report.passed)

    def test_complex_A(self):
        self.assertTrue(check_cool_id(1, 1, [[1]], [[1]], [[complex(1, 0.5)]], 1, precision=PRECISION).passed)

    def test_degree_two(self):
        A = [[1, Fraction(1, 4)], [Fraction(1, 4), 1]]
        self.assertTrue(check_cool_id(1, 2, [[1]], [[1], [0]], A, 1, precision=PRECISION).passed)

    def test_preconditions(self):
        with self.assertRaises(NonPositiveError):
            check_cool_id(1, 1, [[-1]], [[0]], [[1]], 1)
        with self.assertRaises(NonPositiveError):
            check_cool_id(1, 1, [[1]], [[0]], [[1]], -1)
        with self.assertRaises(ValueError):
            check_cool_id(2, 1, [[1]], [[0]], [[1]], 1)
        with self.assertRaises(DomainError):
            check_cool_id(3, 1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 0, 0]], [[1]], 1)


class GroupIdentityTests(unittest.TestCase):
    def test_identity_pair_is_exact(self):
        samples = random_group_samples(1, seed=1)
        identity = GroupElement.identity()
        batch = [GroupSample(identity, identity, samples[0].point)]
        report = check_cocycle(batch, precision=128)
        self.assertEqual(report.abs_error, 0)
        self.assertTrue(check_delta_invariance(batch, precision=128).passed)

    def test_cocycle_batch(self):
        report = check_cocycle(random_group_samples(50, seed=11), precision=128)
        self.assertEqual(report.parameters["count"], 50)
        self.assertLessEqual(report.rel_error, 1e-20)
        self.assertTrue(report.passed)

    def test_delta_batch(self):
        report = check_delta_invariance(random_group_samples(50, seed=3), precision=128)
        self.assertEqual(report.parameters["count"], 100)
        self.assertTrue(report.passed)

    def test_index_two(self):
        report = check_cocycle(random_group_samples(10, seed=5, l=2), S=[[1, 0], [0, 1]], precision=128)
        self.assertTrue(report.passed)

    def test_heisenberg_bookkeeping(self):
        samples = random_group_samples(20, seed=7, heisenberg_only=True)
        report = check_heisenberg_law(samples)
        self.assertEqual(report.abs_error, 0)
        self.assertTrue(report.passed)
        self.assertTrue(check_cocycle(samples, precision=128).passed)

    def test_heisenberg_law_rejects_symplectic_part(self):
        with self.assertRaises(ValueError):
            check_heisenberg_law(random_group_samples(3, seed=2))

    def test_samples_are_reproducible(self):
        first = random_group_samples(5, seed=9)
        second = random_group_samples(5, seed=9)
        self.assertEqual([(s.first, s.second) for s in first], [(s.first, s.second) for s in second])


class GridTests(unittest.TestCase):
    def test_records_serialize(self):
        records = json.loads(json.dumps(grid_records()))
        self.assertEqual(set(records), set(DEFAULT_GRIDS))
        self.assertEqual(records["int_det"][1]["k"], "5/2")

    def test_group_grids_pass(self):
        for name in ("cocycle", "delta_invariance", "heisenberg_law"):
            reports = run_grid(name, precision=128)
            self.assertTrue(all(report.passed for report in reports), name)

    def test_quadrature_grids_pass(self):
        for name in ("int_det", "cool_id"):
            reports = run_grid(name, precision=PRECISION)
            self.assertEqual(len(reports), len(DEFAULT_GRIDS[name]))
            for report in reports:
                self.assertTrue(report.passed, report.as_record())

    def test_unknown_grid(self):
        with self.assertRaises(ValueError):
            run_grid("nope")


if __name__ == "__main__":
    unittest.main()
