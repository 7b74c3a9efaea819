"""Line-oriented corpus files.

A corpus file is a header of ``key: value`` lines followed by one record per
line of ``key=value`` tokens::

    format: 1.0
    kind: jacobi
    n: 1
    l: 1
    k: 10
    S: 1
    t=1 r=1 c=1

Rationals are written ``p/q`` and matrices row-major as ``[[a,b],[c,d]]``
(a ``1 x 1`` matrix is written as its entry).  Blank lines and lines starting
with ``#`` are ignored.  ``format_corpus`` writes the canonical form, so
``format_corpus(parse_corpus_text(text)) == text`` for canonical files.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Tuple, Union

from mpmath import mp

from ..errors import CorpusError
from ..forms import linalg
from ..forms.expansion import JacobiExpansion, ThetaComponents, discriminant_matrix, format_index, index_key
from ..forms.index import IndexMatrix
from ..forms.linalg import Matrix
from ..lfunction import EulerFactorTable, LSeriesSpec, SatakeValue
from ..numth.characters import DirichletCharacter
from ..numth.exact import format_fraction, to_fraction
from ..projection.hol import NearlyHolExpansion
from ..projection.polynomials import SymPoly

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1.0"
SUPPORTED_MAJOR = 1

KINDS = ("jacobi", "nearly-hol", "theta-components", "eigenvalues", "satake")

Corpus = Union[JacobiExpansion, NearlyHolExpansion, ThetaComponents, LSeriesSpec, EulerFactorTable]

_BOOLEANS = {"true": True, "false": False}


def parse_matrix(text: str) -> Matrix:
    """``"3/2"`` or ``"[[1,0],[0,2]]"`` to a Fraction matrix."""
    text = text.strip().replace(" ", "")
    if not text.startswith("["):
        return ((to_fraction(text),),)
    if not (text.startswith("[[") and text.endswith("]]")):
        raise ValueError(f"malformed matrix '{text}'")
    rows = text[2:-2].split("],[")
    return linalg.as_matrix([[cell for cell in row.split(",")] for row in rows])


def _parse_bool(text: str) -> bool:
    try:
        return _BOOLEANS[text.strip().lower()]
    except KeyError:
        raise ValueError(f"expected true or false, got '{text}'") from None


def _format_bool(value: bool) -> str:
    return "true" if value else "false"


class _Reader:
    """Splits a corpus text into header fields and body records, keeping line numbers."""

    def __init__(self, text: str, path: str | None) -> None:
        self.path = path
        self.header: Dict[str, Tuple[str, int]] = {}
        self.records: List[Tuple[Dict[str, str], int]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line.split(":", 1)[0] or ":" not in line:
                self.records.append((self._tokens(line, number), number))
                continue
            if self.records:
                raise self.error("header line after the first record", number)
            key, _, value = line.partition(":")
            key = key.strip()
            if key in self.header:
                raise self.error(f"duplicate header field '{key}'", number)
            self.header[key] = (value.strip(), number)
        self._check_version()

    def error(self, message: str, line: int | None = None) -> CorpusError:
        return CorpusError(message, line=line, path=self.path)

    def _tokens(self, line: str, number: int) -> Dict[str, str]:
        tokens: Dict[str, str] = {}
        for token in line.split():
            key, sep, value = token.partition("=")
            if not sep or not key or not value:
                raise self.error(f"malformed token '{token}', expected key=value", number)
            if key in tokens:
                raise self.error(f"duplicate field '{key}'", number)
            tokens[key] = value
        return tokens

    def _check_version(self) -> None:
        if "format" not in self.header:
            raise self.error("missing 'format' header", 1)
        version, line = self.header["format"]
        major, _, _ = version.partition(".")
        if not major.isdigit() or int(major) != SUPPORTED_MAJOR:
            raise self.error(f"unsupported format version {version}, this reader handles {SUPPORTED_MAJOR}.x", line)

    def get(self, key: str, parse: Callable[[str], Any] = str, default: Any = None, *, required: bool = True) -> Any:
        if key not in self.header:
            if required and default is None:
                raise self.error(f"missing '{key}' header")
            return default
        value, line = self.header[key]
        try:
            return parse(value)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise self.error(f"bad '{key}' header: {exc}", line) from exc

    def field(self, tokens: Dict[str, str], key: str, line: int, parse: Callable[[str], Any] = str) -> Any:
        if key not in tokens:
            raise self.error(f"record is missing '{key}'", line)
        try:
            return parse(tokens[key])
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise self.error(f"bad '{key}' value '{tokens[key]}': {exc}", line) from exc

    def index_matrix(self) -> IndexMatrix:
        S = self.get("S", lambda text: IndexMatrix.of(parse_matrix(text)))
        l = self.get("l", int, S.l, required=False)
        if l != S.l:
            raise self.error(f"header says l={l} but S is {S.l}x{S.l}", self.header["l"][1])
        return S


def _read_indexed(reader: _Reader, n: int, S: IndexMatrix, value_key: str, parse_value: Callable[[str], Any]):
    out: Dict[Any, Any] = {}
    for tokens, line in reader.records:
        t = reader.field(tokens, "t", line, parse_matrix)
        r = reader.field(tokens, "r", line, parse_matrix)
        try:
            key = index_key(t, r, n=n, l=S.l)
        except ValueError as exc:
            raise reader.error(str(exc), line) from exc
        if key in out:
            raise reader.error(f"duplicate record {format_index(key)}", line)
        out[key] = (reader.field(tokens, value_key, line, parse_value), line)
    return out


def _parse_jacobi(reader: _Reader) -> JacobiExpansion:
    n = reader.get("n", int)
    S = reader.index_matrix()
    lambda_level = reader.get("lambda", int, 1, required=False)
    cuspidal = reader.get("cuspidal", _parse_bool, False, required=False)
    records = _read_indexed(reader, n, S, "c", to_fraction)
    for (t, r), (_, line) in records.items():
        h = discriminant_matrix(S, t, r, lambda_level)
        positive = linalg.is_positive_definite(h) if cuspidal else linalg.is_positive_semidefinite(h)
        if not positive:
            raise reader.error(f"index {format_index((t, r))} violates 4t - lambda S^-1[r] >= 0", line)
    try:
        return JacobiExpansion(
            n=n,
            k=reader.get("k", to_fraction),
            S=S,
            coefficients={key: value for key, (value, _) in records.items()},
            cap=reader.get("cap", to_fraction),
            lambda_level=lambda_level,
            cuspidal=cuspidal,
            level=reader.get("level", int, 1, required=False),
            label=reader.get("label", str, "", required=False),
        )
    except ValueError as exc:
        raise reader.error(str(exc)) from exc


def _parse_nearly_hol(reader: _Reader) -> NearlyHolExpansion:
    n = reader.get("n", int)
    S = reader.index_matrix()
    det_form = reader.get("det_form", _parse_bool, False, required=False)
    prefix = "y" if det_form else "u"
    records = _read_indexed(reader, n, S, "p", lambda text: SymPoly.parse(text, n, prefix))
    try:
        return NearlyHolExpansion(
            n=n,
            k=reader.get("k", to_fraction),
            S=S,
            coefficients={key: value for key, (value, _) in records.items()},
            cap=reader.get("cap", to_fraction),
            lambda_level=reader.get("lambda", int, 1, required=False),
            degree_bound=reader.get("D", int, None, required=False),
            det_form=det_form,
            det_exponent=reader.get("m", int, 0, required=False),
            label=reader.get("label", str, "", required=False),
        )
    except ValueError as exc:
        raise reader.error(str(exc)) from exc


def _parse_theta(reader: _Reader) -> ThetaComponents:
    n = reader.get("n", int)
    S = reader.index_matrix()
    components: Dict[Matrix, Dict[Matrix, Any]] = {}
    for tokens, line in reader.records:
        try:
            h = linalg.reduce_mod(linalg.as_matrix(reader.field(tokens, "h", line, parse_matrix), rows=S.l, cols=n), 2)
            exponent = linalg.as_matrix(reader.field(tokens, "D", line, parse_matrix), rows=n, cols=n)
        except ValueError as exc:
            raise reader.error(str(exc), line) from exc
        series = components.setdefault(h, {})
        if exponent in series:
            raise reader.error(f"duplicate record h={linalg.format_matrix(h)} D={linalg.format_matrix(exponent)}", line)
        series[exponent] = reader.field(tokens, "c", line, to_fraction)
    try:
        return ThetaComponents(
            n=n,
            S=S,
            weight=reader.get("k", to_fraction),
            components=components,
            cap=reader.get("cap", to_fraction),
            lambda_level=reader.get("lambda", int, 1, required=False),
            experimental=reader.get("experimental", _parse_bool, False, required=False),
        )
    except ValueError as exc:
        raise reader.error(str(exc)) from exc


def _parse_eigenvalues(reader: _Reader) -> LSeriesSpec:
    eigenvalues: Dict[int, Any] = {}
    for tokens, line in reader.records:
        a = reader.field(tokens, "a", line, int)
        if a in eigenvalues:
            raise reader.error(f"duplicate eigenvalue for a={a}", line)
        eigenvalues[a] = reader.field(tokens, "lambda", line, to_fraction)
    try:
        return LSeriesSpec.build(
            reader.get("n", int),
            reader.get("k", to_fraction),
            reader.index_matrix(),
            chi=reader.get("chi", DirichletCharacter.parse, DirichletCharacter.principal(1), required=False),
            level=reader.get("level", int, 1, required=False),
            eigenvalues=eigenvalues,
            label=reader.get("label", str, "", required=False),
        )
    except ValueError as exc:
        raise reader.error(str(exc)) from exc


def _parse_satake(reader: _Reader) -> EulerFactorTable:
    satake: Dict[int, Tuple[SatakeValue, ...]] = {}
    polynomials: Dict[int, Tuple[Any, ...]] = {}
    for tokens, line in reader.records:
        p = reader.field(tokens, "p", line, int)
        if p in satake or p in polynomials:
            raise reader.error(f"duplicate Euler factor for p={p}", line)
        if "mu" in tokens:
            satake[p] = reader.field(tokens, "mu", line, lambda text: tuple(SatakeValue.of(v) for v in text.split(",")))
        else:
            polynomials[p] = reader.field(tokens, "L", line, lambda text: tuple(to_fraction(v) for v in text.split(",")))
    try:
        return EulerFactorTable(reader.get("n", int), reader.get("level", int, 1, required=False), satake, polynomials)
    except ValueError as exc:
        raise reader.error(str(exc)) from exc


_PARSERS: Mapping[str, Callable[[_Reader], Corpus]] = {
    "jacobi": _parse_jacobi,
    "nearly-hol": _parse_nearly_hol,
    "theta-components": _parse_theta,
    "eigenvalues": _parse_eigenvalues,
    "satake": _parse_satake,
}


def parse_corpus_text(text: str, *, path: str | None = None) -> Corpus:
    reader = _Reader(text, path)
    kind = reader.get("kind")
    if kind not in _PARSERS:
        raise reader.error(f"unknown kind '{kind}', expected one of {', '.join(KINDS)}", reader.header["kind"][1])
    corpus = _PARSERS[kind](reader)
    logger.debug("parsed %s corpus with %d records from %s", kind, len(reader.records), path or "<text>")
    return corpus


def parse_corpus(path: str | Path) -> Corpus:
    """Load and validate a corpus file; the returned type depends on its ``kind``."""
    path = Path(path)
    if not path.is_file():
        raise CorpusError("file does not exist", path=str(path))
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"not UTF-8: {exc}", path=str(path)) from exc
    return parse_corpus_text(text, path=str(path))


def _header(kind: str, fields: List[Tuple[str, Any]]) -> List[str]:
    lines = [f"format: {FORMAT_VERSION}", f"kind: {kind}"]
    lines.extend(f"{key}: {value}" for key, value in fields if value not in (None, ""))
    return lines


def _number(value: Any) -> str:
    if isinstance(value, mp.mpc):
        raise ValueError(f"complex value {value} cannot be written to a corpus file")
    if isinstance(value, mp.mpf):
        return mp.nstr(value, mp.dps)
    return format_fraction(to_fraction(value))


def _format_jacobi(f: JacobiExpansion) -> List[str]:
    lines = _header(
        "jacobi",
        [
            ("n", f.n),
            ("l", f.l),
            ("k", format_fraction(f.k)),
            ("S", linalg.format_matrix(f.S.rows)),
            ("lambda", f.lambda_level),
            ("level", f.level),
            ("cap", format_fraction(f.cap)),
            ("cuspidal", _format_bool(f.cuspidal)),
            ("label", f.label),
        ],
    )
    lines.extend(f"{format_index(key)} c={format_fraction(c)}" for key, c in f.items())
    return lines


def _format_nearly_hol(f: NearlyHolExpansion) -> List[str]:
    lines = _header(
        "nearly-hol",
        [
            ("n", f.n),
            ("l", f.l),
            ("k", format_fraction(f.k)),
            ("S", linalg.format_matrix(f.S.rows)),
            ("lambda", f.lambda_level),
            ("cap", format_fraction(f.cap)),
            ("D", f.degree_bound),
            ("det_form", _format_bool(f.det_form)),
            ("m", f.det_exponent),
            ("label", f.label),
        ],
    )
    lines.extend(f"{format_index(key)} p={p.format()}" for key, p in f.items())
    return lines


def _format_theta(tc: ThetaComponents) -> List[str]:
    lines = _header(
        "theta-components",
        [
            ("n", tc.n),
            ("l", tc.S.l),
            ("k", format_fraction(tc.weight)),
            ("S", linalg.format_matrix(tc.S.rows)),
            ("lambda", tc.lambda_level),
            ("cap", format_fraction(tc.cap)),
            ("experimental", _format_bool(tc.experimental)),
        ],
    )
    for h, series in tc.components.items():
        for exponent, c in series.items():
            lines.append(f"h={linalg.format_matrix(h)} D={linalg.format_matrix(exponent)} c={format_fraction(c)}")
    return lines


def _format_eigenvalues(spec: LSeriesSpec) -> List[str]:
    if spec.index is None:
        raise ValueError("an eigenvalue file needs the index matrix; build the spec with LSeriesSpec.build")
    lines = _header(
        "eigenvalues",
        [
            ("n", spec.n),
            ("l", spec.l),
            ("k", format_fraction(spec.k)),
            ("S", linalg.format_matrix(spec.index.rows)),
            ("level", spec.level),
            ("chi", spec.chi.describe()),
            ("label", spec.label),
        ],
    )
    lines.extend(f"a={a} lambda={_number(value)}" for a, value in sorted(spec.eigenvalues.items()))
    return lines


def _format_satake(table: EulerFactorTable) -> List[str]:
    lines = _header("satake", [("n", table.n), ("level", table.level)])
    for p in table.primes:
        if p in table.satake:
            lines.append(f"p={p} mu={','.join(mu.format() for mu in table.satake[p])}")
        else:
            lines.append(f"p={p} L={','.join(_number(c) for c in table.polynomials[p])}")
    return lines


def format_corpus(corpus: Corpus) -> str:
    """Canonical text of ``corpus``."""
    if isinstance(corpus, JacobiExpansion):
        lines = _format_jacobi(corpus)
    elif isinstance(corpus, NearlyHolExpansion):
        lines = _format_nearly_hol(corpus)
    elif isinstance(corpus, ThetaComponents):
        lines = _format_theta(corpus)
    elif isinstance(corpus, LSeriesSpec):
        lines = _format_eigenvalues(corpus)
    elif isinstance(corpus, EulerFactorTable):
        lines = _format_satake(corpus)
    else:
        raise TypeError(f"cannot write {type(corpus).__name__} as a corpus file")
    return "\n".join(lines) + "\n"


def write_corpus(corpus: Corpus, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_corpus(corpus), encoding="utf-8")
    logger.debug("wrote %s", path)
    return path
