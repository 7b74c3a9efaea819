from __future__ import annotations

import dataclasses
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from mpmath import mp

from jacobiforms.corpus import format_corpus, parse_corpus, parse_corpus_text, parse_matrix, write_corpus
from jacobiforms.errors import CorpusError
from jacobiforms.forms import JacobiExpansion, ThetaComponents, theta_decompose, theta_series
from jacobiforms.forms import builders
from jacobiforms.lfunction import EulerFactorTable, LSeriesSpec, bold_lambda, normalized_special_value
from jacobiforms.projection import NearlyHolExpansion

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
PRECISION = 128

MINIMAL = """format: 1.0
kind: jacobi
n: 1
l: 1
k: 12
S: 1
cap: 2
t=1 r=0 c=5
"""


class ParseTests(unittest.TestCase):
    def test_minimal_file(self):
        f = parse_corpus_text(MINIMAL)
        self.assertIsInstance(f, JacobiExpansion)
        self.assertEqual(f.coefficient(1, 0), 5)
        self.assertEqual(f.k, 12)
        self.assertFalse(f.cuspidal)

    def test_comments_and_blank_lines(self):
        text = "# generated by hand\n\n" + MINIMAL.replace("t=1 r=0 c=5", "t=1 r=0 c=5\n\n# tail\nt=1 r=1 c=-1/2")
        f = parse_corpus_text(text)
        self.assertEqual(f.coefficient(1, 1), Fraction(-1, 2))

    def test_negative_discriminant_is_rejected_with_line(self):
        text = MINIMAL + "t=1 r=3 c=1\n"
        with self.assertRaises(CorpusError) as ctx:
            parse_corpus_text(text, path="bad.txt")
        self.assertEqual(ctx.exception.line, 9)
        self.assertIn("t=1 r=3", str(ctx.exception))
        self.assertTrue(str(ctx.exception).startswith("bad.txt:9:"))

    def test_unknown_major_version(self):
        with self.assertRaises(CorpusError) as ctx:
            parse_corpus_text(MINIMAL.replace("format: 1.0", "format: 2.0"))
        self.assertEqual(ctx.exception.line, 1)

    def test_minor_version_is_accepted(self):
        f = parse_corpus_text(MINIMAL.replace("format: 1.0", "format: 1.3"))
        self.assertEqual(len(f), 1)

    def test_unknown_kind(self):
        with self.assertRaises(CorpusError):
            parse_corpus_text(MINIMAL.replace("kind: jacobi", "kind: siegel"))

    def test_header_after_record(self):
        with self.assertRaises(CorpusError) as ctx:
            parse_corpus_text(MINIMAL + "label: late\n")
        self.assertEqual(ctx.exception.line, 9)

    def test_malformed_token(self):
        with self.assertRaises(CorpusError):
            parse_corpus_text(MINIMAL.replace("c=5", "c5"))

    def test_duplicate_record(self):
        with self.assertRaises(CorpusError):
            parse_corpus_text(MINIMAL + "t=1 r=0 c=6\n")

    def test_l_must_match_s(self):
        with self.assertRaises(CorpusError):
            parse_corpus_text(MINIMAL.replace("l: 1", "l: 2"))

    def test_missing_file(self):
        with self.assertRaises(CorpusError):
            parse_corpus(CORPUS / "does_not_exist.txt")

    def test_matrix_syntax(self):
        self.assertEqual(parse_matrix("3/2"), ((Fraction(3, 2),),))
        self.assertEqual(parse_matrix("[[1, 1/2], [1/2, 1]]"), ((1, Fraction(1, 2)), (Fraction(1, 2), 1)))
        with self.assertRaises(ValueError):
            parse_matrix("[1,2]")


class ShippedCorpusTests(unittest.TestCase):
    def test_files_are_canonical(self):
        paths = sorted(CORPUS.glob("*.txt"))
        self.assertGreaterEqual(len(paths), 7)
        for path in paths:
            with self.subTest(path=path.name):
                self.assertEqual(format_corpus(parse_corpus(path)), path.read_text(encoding="utf-8"))

    def test_phi10(self):
        f = parse_corpus(CORPUS / "phi10.txt")
        self.assertEqual(f.coefficients, builders.phi10(2).coefficients)
        self.assertTrue(f.cuspidal)
        self.assertEqual(f.label, "phi10")

    def test_theta_files(self):
        self.assertEqual(parse_corpus(CORPUS / "theta_h0.txt").coefficients, theta_series(1, cap=4).coefficients)
        self.assertEqual(parse_corpus(CORPUS / "theta_h1.txt").coefficients, theta_series(1, h=1, cap=3).coefficients)

    def test_theta_components_of_phi10(self):
        tc = parse_corpus(CORPUS / "phi10_theta.txt")
        self.assertIsInstance(tc, ThetaComponents)
        self.assertEqual(tc.components, theta_decompose(builders.phi10(2)).components)
        self.assertEqual(tc.weight, Fraction(19, 2))

    def test_e2star_phi10(self):
        g = parse_corpus(CORPUS / "e2star_phi10.txt")
        self.assertIsInstance(g, NearlyHolExpansion)
        self.assertEqual(g.coefficients, builders.e2star_times(builders.phi10(2)).coefficients)
        self.assertEqual(g.degree_bound, 1)

    def test_eigenvalue_fixture_with_satake_table(self):
        spec = parse_corpus(CORPUS / "fixture_eigenvalues.txt")
        table = parse_corpus(CORPUS / "fixture_satake.txt")
        self.assertIsInstance(spec, LSeriesSpec)
        self.assertIsInstance(table, EulerFactorTable)
        self.assertEqual(table.coverage, 60)
        spec = dataclasses.replace(spec, euler=table)
        with mp.workprec(PRECISION):
            numerator = bold_lambda(spec, 16, 50, precision=PRECISION)
            norm = numerator / (mp.power(mp.pi, 86) * mp.mpf(3) / 7)
            _, report = normalized_special_value(spec, 16, norm, 50, precision=PRECISION)
        self.assertEqual(report["recognition"]["candidate"], "3/7")


class WriteTests(unittest.TestCase):
    def test_write_and_reload(self):
        f = builders.phi10(3)
        with tempfile.TemporaryDirectory() as tmp:
            path = write_corpus(f, Path(tmp) / "nested" / "phi10.txt")
            again = parse_corpus(path)
        self.assertEqual(again.coefficients, f.coefficients)
        self.assertEqual(again.cap, 3)

    def test_eigenvalues_are_written_in_order(self):
        spec = LSeriesSpec.build(1, 12, 1, eigenvalues={3: 252, 1: 1, 2: -24}, label="delta")
        text = format_corpus(spec)
        self.assertIn("a=1 lambda=1\na=2 lambda=-24\na=3 lambda=252\n", text)
        self.assertEqual(parse_corpus_text(text).eigenvalues, {1: 1, 2: -24, 3: 252})

    def test_unsupported_object(self):
        with self.assertRaises(TypeError):
            format_corpus({"t": 1})


if __name__ == "__main__":
    unittest.main()
