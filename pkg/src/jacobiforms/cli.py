#!/usr/bin/env python3
"""Command-line interface for jacobiforms."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple

from mpmath import mp

from .config import default_truncation, resolve_precision
from .corpus import format_corpus, parse_corpus, parse_matrix
from .errors import CorpusError, UsageError
from .forms import JacobiExpansion, ThetaComponents, property_A_check, theta_decompose, theta_reconstruct, theta_series
from .forms.theta import describe_components, theta_pairing_factor
from .identities import DEFAULT_GRIDS, run_grid
from .lfunction import (
    DEFAULT_MAX_HEIGHT,
    EulerFactorTable,
    LSeriesSpec,
    bold_lambda,
    c_Sk,
    eisenstein_exponents,
    exponent_e_sigma,
    exponent_e_sigma_general,
    lambda_normalizer,
    normalized_special_value,
    sigma_window,
)
from .numth import DirichletCharacter, ExactProduct, format_fraction, gamma_n, gamma_n_ratio, psi_S, to_fraction
from .petersson import KERNEL_TOLERANCE, NORMALIZATIONS, kernel_check, kernel_constant, pair_with_poincare
from .projection import NearlyHolExpansion, hol_project

logger = logging.getLogger(__name__)

Output = Tuple[List[Dict[str, Any]], str]

DEFAULT_KERNEL_POINTS = (
    ("1j", "0.25+0.1j"),
    ("0.3+1.2j", "0.1+0.4j"),
    ("-0.2+0.9j", "0.5-0.2j"),
    ("0.45+1.5j", "0.05+0.3j"),
    ("2j", "0.7+0.6j"),
)


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _build_common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--precision",
        type=int,
        default=None,
        help="Working precision in bits (default: JACOBIFORMS_PRECISION or 128)",
    )
    parser.add_argument(
        "--truncation",
        default=None,
        help="Trace cap for generated expansions (default: JACOBIFORMS_TRUNCATION or 6)",
    )
    parser.add_argument(
        "--cutoff",
        type=int,
        default=None,
        help="Euler product / Dirichlet series cutoff (default: JACOBIFORMS_CUTOFF or 1000)",
    )
    parser.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="Relative tolerance for numeric checks (default: JACOBIFORMS_TOLERANCE or the check's own)",
    )
    parser.add_argument("--format", choices=("text", "records"), default="text", help="Output format")
    parser.add_argument("--output", default=None, help="Write the output to this file instead of stdout")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    return parser


def _build_parser() -> argparse.ArgumentParser:
    common = _build_common_parser()
    parser = argparse.ArgumentParser(
        prog="jacobiforms",
        description="Exact and high-precision computations with Siegel-Jacobi forms",
    )
    commands = parser.add_subparsers(dest="command", metavar="command")

    theta = commands.add_parser("theta", parents=[common], help="Emit a theta series as a corpus file")
    theta.add_argument("--S", dest="index", default="1", help="Index matrix, e.g. 1 or [[1,0],[0,2]]")
    theta.add_argument("--h", dest="characteristic", default=None, help="Characteristic (l x n matrix)")
    theta.add_argument("--lattice", default=None, help="Basis of the summation lattice (default 2I)")
    theta.add_argument("--degree", type=int, default=1, help="Degree n")
    theta.set_defaults(handler=_run_theta)

    decompose = commands.add_parser("decompose", parents=[common], help="Split a Jacobi expansion into theta components")
    decompose.add_argument("path", help="jacobi corpus file")
    decompose.set_defaults(handler=_run_decompose)

    reconstruct = commands.add_parser("reconstruct", parents=[common], help="Rebuild a Jacobi expansion from theta components")
    reconstruct.add_argument("path", help="theta-components corpus file")
    reconstruct.add_argument("--k", default=None, help="Weight of the result (default: component weight + l/2)")
    reconstruct.add_argument("--cuspidal", action="store_true", help="Mark the result as a cusp form")
    reconstruct.set_defaults(handler=_run_reconstruct)

    property_a = commands.add_parser("check-property-a", parents=[common], help="Check cuspidality of every theta component")
    property_a.add_argument("path", help="jacobi corpus file")
    property_a.set_defaults(handler=_run_property_a)

    project = commands.add_parser("project", parents=[common], help="Holomorphic projection of a corpus expansion")
    project.add_argument("path", help="jacobi or nearly-hol corpus file")
    project.add_argument("--strict", action="store_true", help="Fail on indices with a non-positive discriminant")
    project.set_defaults(handler=_run_project)

    pair = commands.add_parser("pair", parents=[common], help="Petersson product with a Poincare series")
    pair.add_argument("path", help="jacobi corpus file (cusp form)")
    pair.add_argument("--t", required=True, help="Index t of the Poincare series")
    pair.add_argument("--r", required=True, help="Index r of the Poincare series")
    pair.set_defaults(handler=_run_pair)

    kernel = commands.add_parser("kernel-check", parents=[common], help="Reproducing-kernel check on a one-dimensional cusp space")
    kernel.add_argument("path", help="jacobi corpus file (cusp form, degree one)")
    kernel.add_argument(
        "--point",
        nargs=2,
        action="append",
        metavar=("TAU", "W"),
        help="Test point; W lists l complex entries separated by commas (repeatable)",
    )
    kernel.set_defaults(handler=_run_kernel_check)

    lvalue = commands.add_parser("lvalue", parents=[common], help="Bold Lambda, normalized special value and recognition")
    lvalue.add_argument("path", help="eigenvalues corpus file")
    lvalue.add_argument("--satake", default=None, help="satake corpus file with Euler factors")
    lvalue.add_argument("--sigma", required=True, help="Evaluation parameter sigma")
    lvalue.add_argument("--norm", default=None, help="Petersson norm <f, f>; enables the normalized value")
    lvalue.add_argument("--max-height", type=int, default=DEFAULT_MAX_HEIGHT, help="Height bound for rational recognition")
    lvalue.add_argument("--override", action="store_true", help="Continue outside the algebraicity window")
    lvalue.set_defaults(handler=_run_lvalue)

    constants = commands.add_parser("constants", parents=[common], help="Exact constants and exponents")
    which = constants.add_mutually_exclusive_group(required=True)
    for flag, text in _CONSTANT_HELP.items():
        which.add_argument(f"--{flag}", dest="constant", action="store_const", const=flag, help=text)
    constants.add_argument("params", nargs="*", help="key=value parameters")
    constants.set_defaults(handler=_run_constants)

    verify = commands.add_parser("verify", parents=[common], help="Replay the shipped identity grids")
    verify.add_argument("--grid", action="append", default=None, help="Grid to run (repeatable; default: all)")
    verify.set_defaults(handler=_run_verify)
    return parser


def _load(path: str, *kinds: type) -> Any:
    corpus = parse_corpus(path)
    if kinds and not isinstance(corpus, kinds):
        names = ", ".join(kind.__name__ for kind in kinds)
        raise CorpusError(f"expected {names}, got {type(corpus).__name__}", path=path)
    return corpus


def _truncation(args: argparse.Namespace, fallback: Any = None) -> Any:
    if args.truncation is None:
        return fallback
    try:
        return to_fraction(args.truncation)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--truncation must be a rational number, got {args.truncation!r}") from exc


def _number(value: Any) -> str:
    if isinstance(value, ExactProduct):
        return str(value)
    if isinstance(value, (int, bool)):
        return str(value)
    if hasattr(value, "numerator"):
        return format_fraction(value)
    if isinstance(value, (mp.mpf, mp.mpc)):
        return mp.nstr(value, 30)
    return str(value)


def _corpus_output(obj: Any, record: Dict[str, Any]) -> Output:
    return [record], format_corpus(obj)


def _run_theta(args: argparse.Namespace) -> Output:
    f = theta_series(
        parse_matrix(args.index),
        h=None if args.characteristic is None else parse_matrix(args.characteristic),
        L=None if args.lattice is None else parse_matrix(args.lattice),
        cap=_truncation(args, default_truncation()),
        n=args.degree,
    )
    return _corpus_output(f, f.as_record())


def _run_decompose(args: argparse.Namespace) -> Output:
    tc = theta_decompose(_load(args.path, JacobiExpansion))
    record = {"weight": format_fraction(tc.weight), "classes": tc.class_count, "experimental": tc.experimental}
    record["components"] = describe_components(tc)
    return _corpus_output(tc, record)


def _run_reconstruct(args: argparse.Namespace) -> Output:
    tc = _load(args.path, ThetaComponents)
    f = theta_reconstruct(tc, cap=_truncation(args), k=args.k, cuspidal=args.cuspidal)
    return _corpus_output(f, f.as_record())


def _run_property_a(args: argparse.Namespace) -> Output:
    report = property_A_check(_load(args.path, JacobiExpansion))
    lines = [
        f"Property A: {'passed' if report['passed'] else 'failed'}",
        f"Complete decision: {report['complete']}",
        f"Classes: {report['nonzero_classes']} nonzero of {report['classes']}",
    ]
    for row in report["components"]:
        lines.append(f"  h={row['h']} terms={row['terms']} min={row['min_exponent']} cuspidal={row['cuspidal']}")
    return [report], "\n".join(lines) + "\n"


def _run_project(args: argparse.Namespace) -> Output:
    source = _load(args.path, JacobiExpansion, NearlyHolExpansion)
    if isinstance(source, JacobiExpansion):
        source = NearlyHolExpansion.from_holomorphic(source)
    f = hol_project(source, strict=args.strict)
    return _corpus_output(f, f.as_record())


def _run_pair(args: argparse.Namespace) -> Output:
    f = _load(args.path, JacobiExpansion)
    result = pair_with_poincare(f, parse_matrix(args.t), parse_matrix(args.r))
    record = result.as_record()
    precision = resolve_precision(args.precision)
    with mp.workprec(precision):
        record["numeric"] = mp.nstr(result.numeric(precision, vol=mp.pi / 3), 30)
    lines = [f"<f, P> = {record['value']}", f"numeric (vol = pi/3) = {record['numeric']}"]
    return [record], "\n".join(lines) + "\n"


def _parse_point(tau: str, w: str) -> Tuple[Any, Any]:
    try:
        return mp.mpmathify(tau), [[mp.mpmathify(entry)] for entry in w.split(",")]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"malformed point ({tau}, {w}): {exc}") from exc


def _run_kernel_check(args: argparse.Namespace) -> Output:
    f = _load(args.path, JacobiExpansion)
    precision = resolve_precision(args.precision)
    tolerance = KERNEL_TOLERANCE if args.tolerance is None else args.tolerance
    with mp.workprec(precision):
        points = [_parse_point(tau, w) for tau, w in (args.point or DEFAULT_KERNEL_POINTS)]
        reports = kernel_check(f, points, tolerance=tolerance, precision=precision)
        records = [{key: value if isinstance(value, bool) else _jsonable(value) for key, value in row.items()} for row in reports]
    lines = [
        f"tau={row['tau']} w={row['w']} rel_error={row['rel_error']} {'ok' if row['passed'] else 'FAIL'}"
        for row in records
    ]
    failed = sum(not row["passed"] for row in records)
    lines.append(f"{len(records) - failed}/{len(records)} points passed")
    if failed:
        raise _CheckFailure(records, "\n".join(lines) + "\n")
    return records, "\n".join(lines) + "\n"


def _run_lvalue(args: argparse.Namespace) -> Output:
    spec = _load(args.path, LSeriesSpec)
    if args.satake is not None:
        spec = dataclasses.replace(spec, euler=_load(args.satake, EulerFactorTable))
    sigma = to_fraction(args.sigma)
    precision = resolve_precision(args.precision)
    if args.norm is None:
        with mp.workprec(precision):
            value = bold_lambda(spec, sigma, args.cutoff, override=args.override, precision=precision)
            record = {
                "label": spec.label,
                "sigma": format_fraction(sigma),
                "e_sigma": exponent_e_sigma(spec.n, spec.k, spec.l, sigma),
                "bold_lambda": mp.nstr(value, 30),
                "window": sigma_window(spec.n, spec.k, spec.l, sigma),
            }
        text = f"bold Lambda = {record['bold_lambda']}\ne_sigma = {record['e_sigma']}\n"
        return [record], text
    with mp.workprec(precision):
        norm = mp.mpmathify(args.norm)
        _, report = normalized_special_value(
            spec,
            sigma,
            norm,
            args.cutoff,
            max_height=args.max_height,
            override=args.override,
            precision=precision,
        )
    recognition = report["recognition"]
    lines = [
        f"bold Lambda = {report['bold_lambda']}",
        f"e_sigma = {report['e_sigma']}",
        f"normalized value = {recognition['value']}",
        f"candidate = {recognition['candidate']} (height {recognition['height']})",
    ]
    return [report], "\n".join(lines) + "\n"


_CONSTANT_HELP = {
    "gamma-n": "Gamma_n(x): n= x=",
    "gamma-ratio": "Gamma_n(a)/Gamma_n(b): n= a= b=",
    "c-sk": "c_{S,k}: S= k= n= and sigma= or sigma_shift=",
    "e-sigma": "e_sigma: n= k= l= sigma= [d=]",
    "normalizer": "Eisenstein normalizing factor: k= l= n_eis= s= [level=] [chi=] [S=]",
    "kernel-constant": "reproducing-kernel constant: k= n= S= [lambda=] [vol=] [normalization=stated|unfolded]",
    "window": "algebraicity window for sigma: n= k= l= sigma=",
    "eisenstein": "Eisenstein exponents beta, e, r: n= k= l= mu=",
    "psi": "quadratic character psi_S: S=",
    "theta-factor": "det(4S)^(-n/2): S= [n=]",
}


def _params(tokens: List[str]) -> Dict[str, str]:
    params: Dict[str, str] = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not key or not value:
            raise UsageError(f"malformed parameter '{token}', expected key=value")
        params[key] = value
    return params


class _Params:
    def __init__(self, constant: str, values: Dict[str, str]) -> None:
        self.constant = constant
        self.values = values

    def get(self, key: str, parse: Callable[[str], Any] = to_fraction, default: Any = None, *, required: bool = True) -> Any:
        if key not in self.values:
            if required:
                raise UsageError(f"--{self.constant} needs {key}=")
            return default
        try:
            return parse(self.values[key])
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise UsageError(f"bad value for {key}: {exc}") from exc


def _constant_value(name: str, p: _Params, precision: int) -> Any:
    if name == "gamma-n":
        return gamma_n(p.get("n", int), p.get("x", _exact_or_numeric), precision=precision)
    if name == "gamma-ratio":
        return gamma_n_ratio(p.get("n", int), p.get("a"), p.get("b"))
    if name == "c-sk":
        sigma = p.get("sigma", required=False)
        shift = p.get("sigma_shift", required=False)
        if (sigma is None) == (shift is None):
            raise UsageError("--c-sk needs exactly one of sigma= and sigma_shift=")
        return c_Sk(p.get("S", parse_matrix), p.get("k"), p.get("n", int), sigma, sigma_shift=shift)
    if name == "e-sigma":
        n, k, l, sigma = p.get("n", int), p.get("k"), p.get("l", int), p.get("sigma")
        d = p.get("d", int, required=False)
        return exponent_e_sigma(n, k, l, sigma) if d is None else exponent_e_sigma_general(n, k, l, sigma, d)
    if name == "normalizer":
        chi = p.get("chi", DirichletCharacter.parse, DirichletCharacter.principal(1), required=False)
        S = p.get("S", parse_matrix, required=False)
        chi_psi = chi if S is None else chi * psi_S(S).character
        return lambda_normalizer(
            p.get("k"),
            p.get("l", int),
            p.get("n_eis", int),
            p.get("level", int, 1, required=False),
            chi_psi,
            p.get("s", _exact_or_numeric),
            precision=precision,
        )
    if name == "kernel-constant":
        S = p.get("S", parse_matrix)
        vol = p.get("vol", required=False)
        return kernel_constant(
            p.get("k"),
            p.get("n", int),
            len(S),
            S,
            p.get("lambda", int, 1, required=False),
            vol,
            precision=precision,
            normalization=p.get("normalization", _normalization, "stated", required=False),
        )
    if name == "window":
        return sigma_window(p.get("n", int), p.get("k"), p.get("l", int), p.get("sigma"))
    if name == "eisenstein":
        exponents = eisenstein_exponents(p.get("n", int), p.get("k"), p.get("l", int), p.get("mu"))
        return {key: format_fraction(value) for key, value in exponents.items()}
    if name == "psi":
        return psi_S(p.get("S", parse_matrix)).as_record()
    return theta_pairing_factor(p.get("S", parse_matrix), p.get("n", int, 1, required=False))


def _exact_or_numeric(text: str) -> Any:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        return mp.mpmathify(text)


def _normalization(text: str) -> str:
    if text not in NORMALIZATIONS:
        raise ValueError(f"expected one of {', '.join(NORMALIZATIONS)}")
    return text


def _run_constants(args: argparse.Namespace) -> Output:
    params = _Params(args.constant, _params(args.params))
    precision = resolve_precision(args.precision)
    with mp.workprec(precision):
        value = _constant_value(args.constant, params, precision)
        rendered = value if isinstance(value, dict) else _number(value)
    record = {"constant": args.constant, "params": dict(sorted(params.values.items())), "value": rendered}
    if isinstance(value, ExactProduct):
        record["exact"] = value.as_record()
    if isinstance(rendered, dict):
        text = "\n".join(f"{key} = {_number(item)}" for key, item in rendered.items()) + "\n"
    else:
        text = f"{rendered}\n"
    return [record], text


def _run_verify(args: argparse.Namespace) -> Output:
    names = args.grid or list(DEFAULT_GRIDS)
    unknown = [name for name in names if name not in DEFAULT_GRIDS]
    if unknown:
        raise UsageError(f"unknown grid(s) {', '.join(unknown)}; expected one of {', '.join(DEFAULT_GRIDS)}")
    records: List[Dict[str, Any]] = []
    lines: List[str] = []
    for name in names:
        for report in run_grid(name, tolerance=args.tolerance, precision=args.precision):
            record = report.as_record()
            record["grid"] = name
            records.append(record)
            status = "ok" if report.passed else "FAIL"
            lines.append(f"{name}: {report.identity} rel_error={record['rel_error']} {status}")
    failed = sum(not record["passed"] for record in records)
    lines.append(f"{len(records) - failed}/{len(records)} checks passed")
    if failed:
        raise _CheckFailure(records, "\n".join(lines) + "\n")
    return records, "\n".join(lines) + "\n"


def _jsonable(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return _number(value)


class _CheckFailure(Exception):
    """A check ran to completion and some of its cases failed."""

    def __init__(self, records: List[Dict[str, Any]], text: str) -> None:
        super().__init__("some checks failed")
        self.records = records
        self.text = text


def _emit(args: argparse.Namespace, records: List[Dict[str, Any]], text: str) -> None:
    if args.format == "records":
        text = "".join(json.dumps(_jsonable(record), sort_keys=True) + "\n" for record in records)
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.debug("wrote %s", path)
        return
    sys.stdout.write(text)


def _report_error(args: argparse.Namespace | None, exc: Exception) -> None:
    if args is not None and args.format == "records":
        record = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, CorpusError):
            record["line"] = exc.line
            record["path"] = exc.path
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return
    print(f"Error: {exc}", file=sys.stderr)


def main(argv: List[str] | None = None) -> int:
    args_list = list(argv) if argv is not None else sys.argv[1:]
    parser = _build_parser()

    if not args_list:
        parser.print_help()
        return 0

    try:
        args = parser.parse_args(args_list)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help()
        return 0

    setup_logging(args.verbose)
    try:
        records, text = args.handler(args)
    except _CheckFailure as failure:
        _emit(args, failure.records, failure.text)
        return 1
    except UsageError as exc:
        _report_error(args, exc)
        return 2
    except Exception as exc:
        _report_error(args, exc)
        return 1
    _emit(args, records, text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
