"""Max-plus semifield on exact rationals and the tropical Ptolemy flip rule.

Semifield elements are plain :class:`fractions.Fraction` values (ints are
accepted and promoted). There is no ``-inf``: every label is finite, so the
subtraction used by the flip rule is total.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

TropicalValue = Fraction
Number = Union[int, Fraction]


def as_tropical(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact label.

    Floats are rejected on purpose: labels are compared with ``==``.
    """
    if type(value) is Fraction:
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a tropical value")
    if isinstance(value, (Rational, str)):
        return Fraction(value)
    raise TypeError(f"tropical values must be exact rationals, got {type(value).__name__}")


def trop_add(x: Number, y: Number) -> Fraction:
    """Tropical sum ``x (+) y = max(x, y)``."""
    return as_tropical(max(x, y))


def trop_mul(x: Number, y: Number) -> Fraction:
    """Tropical product ``x (x) y = x + y``."""
    return as_tropical(x) + as_tropical(y)


@dataclass(frozen=True)
class QuadLabels:
    """Labels of a quadrilateral: boundary ``a, b, c, d`` in cyclic order, diagonal ``x``.

    ``(a, c)`` and ``(b, d)`` are the opposite pairs.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    x: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "x"):
            object.__setattr__(self, name, as_tropical(getattr(self, name)))

    def with_diagonal(self, x: Number) -> "QuadLabels":
        return QuadLabels(self.a, self.b, self.c, self.d, x)


def flip_label(q: QuadLabels) -> Fraction:
    """Label of the new diagonal after flipping: ``max(a + c, b + d) - x``."""
    return trop_add(trop_mul(q.a, q.c), trop_mul(q.b, q.d)) - q.x
