"""Exact characteristic-class arithmetic in Q[x]/(x^3) and the level-count formula."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chern import ChernClass
from .errors import NonIntegralCount


def _q(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("TruncatedPoly coefficients must be exact (int or Fraction), not float")
    return Fraction(v)


@dataclass(frozen=True)
class TruncatedPoly:
    """``c0 + c1 x + c2 x^2`` with ``x^3 = 0`` and rational coefficients."""

    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, _q(getattr(self, name)))

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2)

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        return TruncatedPoly(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def __mul__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        return wedge(self, other)

    def __str__(self) -> str:
        return f"{self.c0} + {self.c1} x + {self.c2} x^2"


ONE = TruncatedPoly(1, 0, 0)


def wedge(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    return TruncatedPoly(
        a.c0 * b.c0,
        a.c0 * b.c1 + a.c1 * b.c0,
        a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0,
    )


def total_chern_class(c: ChernClass) -> TruncatedPoly:
    return TruncatedPoly(1, c.A, c.B)


def chern_character(c: ChernClass) -> TruncatedPoly:
    return TruncatedPoly(c.r, c.A, Fraction(c.A * c.A - 2 * c.B, 2))


def polyad_character(N: int) -> TruncatedPoly:
    """``exp(N x)`` truncated at ``x^2``."""
    if N < 0:
        raise ValueError(f"polyad number must be nonnegative, got {N}")
    return TruncatedPoly(1, N, Fraction(N * N, 2))


def todd_cp2() -> TruncatedPoly:
    return TruncatedPoly(1, Fraction(3, 2), 1)


def count_closed_form(c: ChernClass, N: int) -> Fraction:
    r, A, B = c.r, c.A, c.B
    return (
        Fraction(r, 2) * N * N
        + (Fraction(3 * r, 2) + A) * N
        + (r + Fraction(3 * A, 2) + Fraction(A * A, 2) - B)
    )


def predicted_count(c: ChernClass, N: int) -> int:
    """Number of quantum levels in a band of class ``c`` on polyad ``N``.

    The ``x^2`` coefficient of ``Ch(F) Ch(polyad) Todd(CP^2)``; cross-checked
    against the expanded quadratic in ``N``.
    """
    value = wedge(wedge(chern_character(c), polyad_character(N)), todd_cp2()).c2
    closed = count_closed_form(c, N)
    if value != closed:
        raise AssertionError(f"x^2 extraction {value} disagrees with the closed form {closed}")
    if value.denominator != 1:
        raise NonIntegralCount(f"class {c} gives a non-integral count {value} at N={N}")
    return int(value)


def direct_sum(a: ChernClass, b: ChernClass) -> ChernClass:
    """Class of ``a (+) b``: ranks add, total Chern classes multiply."""
    prod = wedge(total_chern_class(a), total_chern_class(b))
    return ChernClass(a.r + b.r, int(prod.c1), int(prod.c2))
