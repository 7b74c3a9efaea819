"""Dirichlet characters and the quadratic index character."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Sequence, Tuple

import sympy
from mpmath import mp

from .exact import format_fraction, to_fraction


@dataclass(frozen=True)
class DirichletCharacter:
    """Character modulo ``modulus`` stored as a table of angles.

    ``angles[a]`` is ``None`` when ``gcd(a, modulus) > 1``; otherwise the
    value at ``a`` is ``exp(2*pi*i*angles[a])`` with the angle in ``[0, 1)``.
    """

    modulus: int
    angles: Tuple[Fraction | None, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if len(self.angles) != self.modulus:
            raise ValueError(f"expected {self.modulus} values, got {len(self.angles)}")
        for a, angle in enumerate(self.angles):
            coprime = math.gcd(a, self.modulus) == 1
            if coprime and angle is None:
                raise ValueError(f"character must be nonzero on unit residue {a}")
            if not coprime and angle is not None:
                raise ValueError(f"character must vanish on non-unit residue {a}")
        if self.angles[1 % self.modulus] != 0:
            raise ValueError("character must take the value 1 at 1")
        for a in range(self.modulus):
            for b in range(a, self.modulus):
                first, second = self.angles[a], self.angles[b]
                product = self.angles[(a * b) % self.modulus]
                if first is None or second is None:
                    continue
                if (first + second - product) % 1 != 0:
                    raise ValueError(f"character is not multiplicative at residues {a}, {b}")

    @classmethod
    def from_angles(cls, modulus: int, angles: Iterable[Any], *, label: str = "") -> "DirichletCharacter":
        normalized = tuple(None if angle is None else to_fraction(angle) % 1 for angle in angles)
        return cls(modulus, normalized, label or f"angles:{modulus}")

    @classmethod
    def principal(cls, modulus: int = 1) -> "DirichletCharacter":
        angles = tuple(Fraction(0) if math.gcd(a, modulus) == 1 else None for a in range(modulus))
        return cls(modulus, angles, f"principal:{modulus}")

    @classmethod
    def kronecker(cls, discriminant: int) -> "DirichletCharacter":
        """Character ``a -> (D/a)`` for a fundamental discriminant ``D``."""
        if discriminant == 1:
            return cls.principal(1)
        modulus = abs(discriminant)
        angles = []
        for a in range(modulus):
            value = kronecker_symbol(discriminant, a)
            angles.append(None if value == 0 else Fraction(0 if value == 1 else 1, 2))
        return cls(modulus, tuple(angles), f"kronecker:{discriminant}")

    @classmethod
    def parse(cls, text: str) -> "DirichletCharacter":
        """Inverse of :meth:`describe`; a bare integer ``m`` means ``principal:m``."""
        text = text.strip()
        kind, _, rest = text.partition(":")
        if not rest and kind.lstrip("-").isdigit():
            return cls.principal(int(kind))
        if kind == "principal":
            return cls.principal(int(rest))
        if kind == "kronecker":
            return cls.kronecker(int(rest))
        if kind == "angles":
            modulus, _, cells = rest.partition(":")
            angles = [None if cell == "*" else cell for cell in cells.split(",")]
            return cls.from_angles(int(modulus), angles)
        raise ValueError(f"unrecognized character '{text}'")

    @property
    def is_principal(self) -> bool:
        return all(angle in (None, 0) for angle in self.angles)

    @property
    def is_real(self) -> bool:
        return all(angle is None or angle in (0, Fraction(1, 2)) for angle in self.angles)

    @property
    def parity(self) -> int:
        """+1 for even characters, -1 for odd ones."""
        if self.modulus <= 2:
            return 1
        angle = self.angles[self.modulus - 1]
        return 1 if angle == 0 else -1

    def angle(self, a: int) -> Fraction | None:
        return self.angles[a % self.modulus]

    def exact_value(self, a: int) -> int | None:
        """Value in {-1, 0, 1}, or ``None`` for a non-real value."""
        angle = self.angle(a)
        if angle is None:
            return 0
        if angle == 0:
            return 1
        if angle == Fraction(1, 2):
            return -1
        return None

    def numeric_value(self, a: int):
        angle = self.angle(a)
        if angle is None:
            return mp.mpf(0)
        exact = self.exact_value(a)
        if exact is not None:
            return mp.mpf(exact)
        return mp.expjpi(2 * mp.mpf(angle.numerator) / angle.denominator)

    __call__ = numeric_value

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        modulus = self.modulus * other.modulus // math.gcd(self.modulus, other.modulus)
        angles = []
        for a in range(modulus):
            first, second = self.angle(a), other.angle(a)
            angles.append(None if first is None or second is None else (first + second) % 1)
        return DirichletCharacter(modulus, tuple(angles), f"({self.label})*({other.label})")

    def square(self) -> "DirichletCharacter":
        return self * self

    def conductor(self) -> int:
        """Smallest divisor ``f`` of the modulus through which the character factors."""
        for f in sorted(sympy.divisors(self.modulus)):
            consistent = True
            for a in range(self.modulus):
                if math.gcd(a, self.modulus) != 1:
                    continue
                for b in range(a, self.modulus, f):
                    if math.gcd(b, self.modulus) == 1 and self.angles[b] != self.angles[a]:
                        consistent = False
                        break
                if not consistent:
                    break
            if consistent:
                return f
        return self.modulus

    def describe(self) -> str:
        """Serialization used by the corpus format."""
        if self.label.startswith(("kronecker:", "principal:")):
            return self.label
        cells = ["*" if angle is None else format_fraction(angle) for angle in self.angles]
        return f"angles:{self.modulus}:{','.join(cells)}"


def kronecker_symbol(d: int, a: int) -> int:
    """Kronecker symbol ``(d/a)`` for ``a >= 0``."""
    if a < 0:
        raise ValueError("only non-negative lower arguments are supported")
    if a == 0:
        return 1 if abs(d) == 1 else 0
    if math.gcd(d, a) != 1:
        return 0
    result = 1
    while a % 2 == 0:
        a //= 2
        result *= 1 if d % 8 in (1, 7) else -1
    if a > 1:
        result *= int(sympy.jacobi_symbol(d % a, a))
    return result


def squarefree_part(value: Fraction) -> int:
    """Signed squarefree integer generating the same square class as ``value``."""
    value = to_fraction(value)
    if value == 0:
        raise ValueError("zero has no square class")
    sign = -1 if value < 0 else 1
    core = 1
    for prime, exponent in sympy.factorint(abs(value.numerator * value.denominator)).items():
        if exponent % 2:
            core *= prime
    return sign * core


def field_discriminant(radicand: Fraction) -> int:
    """Discriminant of Q(sqrt(radicand)); 1 when the field is Q."""
    d = squarefree_part(radicand)
    if d == 1:
        return 1
    return d if d % 4 == 1 else 4 * d


@dataclass(frozen=True)
class QuadCharacterPsiS:
    """Quadratic character attached to an index matrix.

    ``radicand`` is the generator used for the character; ``alternate_radicand``
    is the second even-degree normalization, reported alongside.
    """

    l: int
    radicand: Fraction
    discriminant: int
    character: DirichletCharacter
    alternate_radicand: Fraction
    alternate_discriminant: int

    @property
    def branches_agree(self) -> bool:
        return self.discriminant == self.alternate_discriminant

    @property
    def is_principal(self) -> bool:
        return self.discriminant == 1

    def as_record(self) -> Dict[str, Any]:
        return {
            "l": self.l,
            "radicand": format_fraction(self.radicand),
            "discriminant": self.discriminant,
            "alternate_radicand": format_fraction(self.alternate_radicand),
            "alternate_discriminant": self.alternate_discriminant,
            "branches_agree": self.branches_agree,
            "character": self.character.describe(),
        }


def _determinant(rows: Sequence[Sequence[Any]]) -> Fraction:
    matrix = sympy.Matrix([[sympy.Rational(str(to_fraction(x))) for x in row] for row in rows])
    return to_fraction(matrix.det())


def psi_S(S: Any) -> QuadCharacterPsiS:
    """Character of Q(sqrt(+-det 2S)) for an index matrix ``S``.

    Odd ``l`` uses ``det(2S)``; even ``l`` uses ``(-1)^(l/2) det(2S)`` and
    also records ``(-1)^(l/2) det(S)``.
    """
    rows = getattr(S, "rows", S)
    l = len(rows)
    det_s = _determinant(rows)
    det_2s = det_s * 2 ** l
    if l % 2:
        radicand = det_2s
        alternate = det_2s
    else:
        sign = (-1) ** (l // 2)
        radicand = sign * det_2s
        alternate = sign * det_s
    discriminant = field_discriminant(radicand)
    return QuadCharacterPsiS(
        l=l,
        radicand=radicand,
        discriminant=discriminant,
        character=DirichletCharacter.kronecker(discriminant),
        alternate_radicand=alternate,
        alternate_discriminant=field_discriminant(alternate),
    )
