"""Small exact matrices as tuples of Fraction rows, plus mpmath conversions."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Sequence, Tuple

import sympy
from mpmath import mp

from ..numth.exact import fraction_to_mpf, to_fraction

Matrix = Tuple[Tuple[Fraction, ...], ...]


def as_matrix(value: Any, *, rows: int | None = None, cols: int | None = None) -> Matrix:
    """Coerce scalars, nested sequences or sympy matrices to a Fraction matrix."""
    if isinstance(value, sympy.MatrixBase):
        value = value.tolist()
    if not isinstance(value, (list, tuple)):
        value = ((value,),)
    elif value and not isinstance(value[0], (list, tuple)):
        value = tuple((entry,) for entry in value) if rows not in (None, 1) or cols == 1 else (tuple(value),)
    matrix = tuple(tuple(to_fraction(entry) for entry in row) for row in value)
    if not matrix or not matrix[0]:
        raise ValueError("matrices must be non-empty")
    width = len(matrix[0])
    if any(len(row) != width for row in matrix):
        raise ValueError(f"ragged matrix {value!r}")
    if rows is not None and len(matrix) != rows:
        raise ValueError(f"expected {rows} rows, got {len(matrix)}")
    if cols is not None and width != cols:
        raise ValueError(f"expected {cols} columns, got {width}")
    return matrix


def shape(a: Matrix) -> Tuple[int, int]:
    return len(a), len(a[0])


def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))


def identity(size: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(row_a, row_b)) for row_a, row_b in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(row_a, row_b)) for row_a, row_b in zip(a, b))


def scale(a: Matrix, factor: Any) -> Matrix:
    factor = to_fraction(factor)
    return tuple(tuple(factor * x for x in row) for row in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    columns = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in columns) for row in a)


def quadratic(a: Matrix, x: Matrix) -> Matrix:
    """``a[x] = x^T a x``."""
    return matmul(transpose(x), matmul(a, x))


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def is_symmetric(a: Matrix) -> bool:
    return len(a) == len(a[0]) and all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def is_integral(a: Matrix) -> bool:
    return all(x.denominator == 1 for row in a for x in row)


def to_sympy(a: Matrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in a])


def from_sympy(m: sympy.MatrixBase) -> Matrix:
    return as_matrix(m.tolist())


def det(a: Matrix) -> Fraction:
    if len(a) == 1:
        return a[0][0]
    if len(a) == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return to_fraction(to_sympy(a).det())


def inverse(a: Matrix) -> Matrix:
    if det(a) == 0:
        raise ZeroDivisionError("matrix is singular")
    if len(a) == 1:
        return ((1 / a[0][0],),)
    return from_sympy(to_sympy(a).inv())


def is_positive_definite(a: Matrix) -> bool:
    if len(a) == 1:
        return a[0][0] > 0
    return bool(to_sympy(a).is_positive_definite)


def is_positive_semidefinite(a: Matrix) -> bool:
    if len(a) == 1:
        return a[0][0] >= 0
    return bool(to_sympy(a).is_positive_semidefinite)


def reduce_mod(a: Matrix, modulus: Any) -> Matrix:
    """Entrywise reduction into ``[0, modulus)``."""
    modulus = to_fraction(modulus)
    return tuple(tuple(x % modulus for x in row) for row in a)


def to_mp(a: Any) -> "mp.matrix":
    """mpmath matrix from a Fraction matrix, nested numbers or an mp matrix."""
    if isinstance(a, mp.matrix):
        return a
    if isinstance(a, (list, tuple)) and a and isinstance(a[0], (list, tuple)):
        return mp.matrix([[_to_mp_scalar(x) for x in row] for row in a])
    return mp.matrix([[_to_mp_scalar(a)]])


def _to_mp_scalar(x: Any):
    if isinstance(x, (int, Fraction)):
        return fraction_to_mpf(x)
    return mp.mpmathify(x)


def mp_trace(a: "mp.matrix"):
    return mp.fsum(a[i, i] for i in range(a.rows))


def mp_transpose(a: "mp.matrix") -> "mp.matrix":
    return a.T


def mp_det(a: "mp.matrix"):
    if a.rows == 1:
        return a[0, 0]
    return mp.det(a)


def mp_inverse(a: "mp.matrix") -> "mp.matrix":
    if a.rows == 1:
        return mp.matrix([[1 / a[0, 0]]])
    return a ** -1


def flatten(a: Matrix) -> Iterable[Fraction]:
    for row in a:
        yield from row


def format_matrix(a: Sequence[Sequence[Fraction]]) -> str:
    from ..numth.exact import format_fraction

    if len(a) == 1 and len(a[0]) == 1:
        return format_fraction(a[0][0])
    return "[" + ",".join("[" + ",".join(format_fraction(x) for x in row) + "]" for row in a) + "]"
