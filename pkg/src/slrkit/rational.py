"""Exact rational helpers and the ``"p/q"`` wire format."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable

from .errors import DomainError

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: every quantity in the toolkit is exact.
    """
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {value!r}") from exc
    raise DomainError(f"not a rational: {value!r}")


def fmt(q: Fraction) -> str:
    """Serialize as ``"p/q"`` (always with a denominator, lowest terms)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def approx(q: Fraction) -> float:
    """Convenience float, 12 significant digits. Reports only."""
    return float(f"{float(q):.12g}")


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    return den
