from __future__ import annotations

import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import replace
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from mpmath import mp

from jacobiforms.cli import main
from jacobiforms.corpus import parse_corpus
from jacobiforms.identities import ValidationReport
from jacobiforms.lfunction import bold_lambda

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(argv):
    stdout, stderr = StringIO(), StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        code = main(argv)
    return code, stdout.getvalue(), stderr.getvalue()


class ConstantsTests(unittest.TestCase):
    def test_e_sigma(self):
        code, out, _ = run(["constants", "--e-sigma", "n=2", "k=30", "l=1", "sigma=16"])
        self.assertEqual(code, 0)
        self.assertEqual(out, "86\n")

    def test_e_sigma_records(self):
        code, out, _ = run(["constants", "--e-sigma", "n=2", "k=30", "l=1", "sigma=16", "--format", "records"])
        self.assertEqual(code, 0)
        record = json.loads(out)
        self.assertEqual(record["constant"], "e-sigma")
        self.assertEqual(record["value"], "86")

    def test_gamma_ratio(self):
        code, out, _ = run(["constants", "--gamma-ratio", "n=2", "a=4", "b=3"])
        self.assertEqual(code, 0)
        self.assertEqual(out, "15/2\n")

    def test_exact_gamma(self):
        code, out, _ = run(["constants", "--gamma-n", "n=2", "x=2"])
        self.assertEqual(code, 0)
        self.assertEqual(out, "1/2 * pi^(1)\n")

    def test_window_report(self):
        code, out, _ = run(["constants", "--window", "n=2", "k=30", "l=1", "sigma=16"])
        self.assertEqual(code, 0)
        self.assertIn("admissible = True", out)

    def test_kernel_constant_normalization(self):
        code, stated, _ = run(["constants", "--kernel-constant", "k=12", "n=1", "S=1"])
        self.assertEqual(code, 0)
        code, unfolded, _ = run(["constants", "--kernel-constant", "k=12", "n=1", "S=1", "normalization=unfolded"])
        self.assertEqual(code, 0)
        self.assertNotEqual(stated, unfolded)
        code, _, err = run(["constants", "--kernel-constant", "k=12", "n=1", "S=1", "normalization=halved"])
        self.assertEqual(code, 2)
        self.assertIn("normalization", err)

    def test_malformed_token_is_a_usage_error(self):
        code, _, err = run(["constants", "--e-sigma", "n=2", "k30"])
        self.assertEqual(code, 2)
        self.assertIn("malformed parameter", err)

    def test_missing_parameter_is_a_usage_error(self):
        code, _, err = run(["constants", "--e-sigma", "n=2", "k=30"])
        self.assertEqual(code, 2)
        self.assertIn("l=", err)

    def test_pole_is_a_computational_error(self):
        code, _, err = run(["constants", "--gamma-n", "n=2", "x=1/2"])
        self.assertEqual(code, 1)
        self.assertTrue(err.startswith("Error:"))


class ParserTests(unittest.TestCase):
    def test_no_arguments_prints_help(self):
        code, out, _ = run([])
        self.assertEqual(code, 0)
        self.assertIn("jacobiforms", out)

    def test_unknown_command(self):
        code, _, _ = run(["summon"])
        self.assertEqual(code, 2)

    def test_bad_format_choice(self):
        code, _, _ = run(["verify", "--format", "yaml"])
        self.assertEqual(code, 2)


class ThetaCommandTests(unittest.TestCase):
    def test_theta_matches_shipped_file(self):
        code, out, _ = run(["theta", "--S", "1", "--truncation", "4"])
        self.assertEqual(code, 0)
        self.assertEqual(out, (CORPUS / "theta_h0.txt").read_text(encoding="utf-8"))

    def test_theta_output_is_deterministic(self):
        first = run(["theta", "--S", "1", "--h", "1", "--truncation", "3"])
        second = run(["theta", "--S", "1", "--h", "1", "--truncation", "3"])
        self.assertEqual(first, second)
        self.assertEqual(first[1], (CORPUS / "theta_h1.txt").read_text(encoding="utf-8"))

    def test_decompose(self):
        code, out, _ = run(["decompose", str(CORPUS / "phi10.txt")])
        self.assertEqual(code, 0)
        self.assertEqual(out, (CORPUS / "phi10_theta.txt").read_text(encoding="utf-8"))

    def test_reconstruct(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "rebuilt.txt"
            code, _, _ = run(["reconstruct", str(CORPUS / "phi10_theta.txt"), "--k", "10", "--cuspidal", "--output", str(target)])
            self.assertEqual(code, 0)
            rebuilt = parse_corpus(target)
        self.assertEqual(rebuilt.coefficients, parse_corpus(CORPUS / "phi10.txt").coefficients)

    def test_property_a(self):
        code, out, _ = run(["check-property-a", str(CORPUS / "phi10.txt")])
        self.assertEqual(code, 0)
        self.assertIn("Property A: passed", out)
        code, out, _ = run(["check-property-a", str(CORPUS / "theta_h0.txt")])
        self.assertEqual(code, 0)
        self.assertIn("Property A: failed", out)

    def test_wrong_kind(self):
        code, _, err = run(["decompose", str(CORPUS / "phi10_theta.txt")])
        self.assertEqual(code, 1)
        self.assertIn("expected JacobiExpansion", err)


class ProjectionCommandTests(unittest.TestCase):
    def test_holomorphic_input_is_fixed(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "hol.txt"
            code, _, _ = run(["project", str(CORPUS / "phi10.txt"), "--output", str(target)])
            self.assertEqual(code, 0)
            projected = parse_corpus(target)
        self.assertEqual(projected.coefficients, parse_corpus(CORPUS / "phi10.txt").coefficients)

    def test_nearly_holomorphic_input(self):
        code, out, _ = run(["project", str(CORPUS / "e2star_phi10.txt"), "--format", "records"])
        self.assertEqual(code, 0)
        record = json.loads(out)
        self.assertEqual(record["k"], "12")
        self.assertTrue(record["cuspidal"])

    def test_pair(self):
        code, out, _ = run(["pair", str(CORPUS / "phi10.txt"), "--t", "1", "--r", "1", "--format", "records"])
        self.assertEqual(code, 0)
        record = json.loads(out)
        self.assertEqual(record["method"], "closed-form")
        self.assertIn("numeric", record)


class LValueCommandTests(unittest.TestCase):
    def setUp(self):
        self.eigenvalues = str(CORPUS / "fixture_eigenvalues.txt")
        self.satake = str(CORPUS / "fixture_satake.txt")

    def test_bold_lambda_only(self):
        code, out, _ = run(["lvalue", self.eigenvalues, "--satake", self.satake, "--sigma", "16", "--cutoff", "50"])
        self.assertEqual(code, 0)
        self.assertIn("e_sigma = 86", out)

    def test_recognizes_three_sevenths(self):
        spec = parse_corpus(self.eigenvalues)
        table = parse_corpus(self.satake)
        with mp.workprec(128):
            numerator = bold_lambda(replace(spec, euler=table), 16, 50, precision=128)
            norm = mp.nstr(numerator / (mp.power(mp.pi, 86) * mp.mpf(3) / 7), 45)
        code, out, _ = run(
            ["lvalue", self.eigenvalues, "--satake", self.satake, "--sigma", "16", "--cutoff", "50", "--norm", norm, "--format", "records"]
        )
        self.assertEqual(code, 0)
        record = json.loads(out)
        self.assertEqual(record["recognition"]["candidate"], "3/7")

    def test_window_violation(self):
        code, _, err = run(["lvalue", self.eigenvalues, "--satake", self.satake, "--sigma", "30", "--cutoff", "50"])
        self.assertEqual(code, 1)
        self.assertIn("Error:", err)

    def test_records_mode_error(self):
        code, _, err = run(["lvalue", self.eigenvalues, "--sigma", "30", "--format", "records"])
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(err)["error"], "WindowError")

    def test_missing_file(self):
        code, _, err = run(["lvalue", "/nonexistent/eigen.txt", "--sigma", "16", "--format", "records"])
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(err)["error"], "CorpusError")


class VerifyCommandTests(unittest.TestCase):
    def test_heisenberg_grid(self):
        code, out, _ = run(["verify", "--grid", "heisenberg_law"])
        self.assertEqual(code, 0)
        self.assertIn("1/1 checks passed", out)

    def test_unknown_grid(self):
        code, _, _ = run(["verify", "--grid", "moonshine"])
        self.assertEqual(code, 2)

    def test_failure_exits_one(self):
        failing = ValidationReport(
            identity="int_det",
            parameters={"n": 1},
            lhs=mp.mpf(1),
            rhs=mp.mpf(2),
            abs_error=mp.mpf(1),
            rel_error=mp.mpf("0.5"),
            precision=128,
            tolerance=1e-8,
        )
        with patch("jacobiforms.cli.run_grid", return_value=[failing]):
            code, out, _ = run(["verify", "--grid", "int_det", "--format", "records"])
        self.assertEqual(code, 1)
        record = json.loads(out)
        self.assertFalse(record["passed"])
        self.assertEqual(record["grid"], "int_det")


if __name__ == "__main__":
    unittest.main()
