"""Reading and writing corpus files."""

from __future__ import annotations

from .format import FORMAT_VERSION, KINDS, format_corpus, parse_corpus, parse_corpus_text, parse_matrix, write_corpus

__all__ = [
    "FORMAT_VERSION",
    "KINDS",
    "format_corpus",
    "parse_corpus",
    "parse_corpus_text",
    "parse_matrix",
    "write_corpus",
]
