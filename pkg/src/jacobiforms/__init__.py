"""jacobiforms public package API."""

from __future__ import annotations

__version__ = "0.1.0"
__author__ = "jacobiforms developers"

_LAZY = {
    "IndexMatrix": "forms",
    "JacobiExpansion": "forms",
    "ThetaComponents": "forms",
    "GroupElement": "forms",
    "theta_series": "forms",
    "theta_decompose": "forms",
    "theta_reconstruct": "forms",
    "property_A_check": "forms",
    "NearlyHolExpansion": "projection",
    "SymPoly": "projection",
    "hol_project": "projection",
    "matrix_diff_apply": "projection",
    "ExactProduct": "numth",
    "DirichletCharacter": "numth",
    "gamma_n": "numth",
    "gamma_n_ratio": "numth",
    "rational_recognize": "numth",
    "pair_with_poincare": "petersson",
    "kernel_constant": "petersson",
    "petersson_quadrature": "petersson",
    "unfolded_pairing": "petersson",
    "kernel_check": "petersson",
    "LSeriesSpec": "lfunction",
    "EulerFactorTable": "lfunction",
    "standard_L": "lfunction",
    "normalized_special_value": "lfunction",
    "check_int_det": "identities",
    "check_cool_id": "identities",
    "parse_corpus": "corpus",
    "write_corpus": "corpus",
}


def __getattr__(name: str):
    if name in _LAZY:
        from importlib import import_module

        module = import_module(f".{_LAZY[name]}", __name__)
        return getattr(module, name)

    raise AttributeError(f"module '{__name__}' has no attribute '{name}'")


__all__ = sorted(_LAZY)
