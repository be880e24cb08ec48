"""Exact integer/rational helpers.

Rationals are plain :class:`fractions.Fraction` values (always reduced, positive
denominator, arbitrary precision).  This module adds the binomial helper and the
canonical ``"-p/q"`` text format used by every serialized output.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "Fraction",
    "RationalParseError",
    "binomial",
    "parse_rational",
    "render_rational",
    "as_rational",
]


class RationalParseError(ValueError):
    """Raised for text that is not a canonical-grammar rational."""

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        super().__init__(f"{reason} at position {position} in {text!r}")


def binomial(n: int, k: int) -> int:
    """Return C(n, k); ``k > n`` or negative arguments are a domain error."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial({n}, {k}): arguments must be nonnegative")
    if k > n:
        raise ValueError(f"binomial({n}, {k}): k exceeds n")
    return math.comb(n, k)


def parse_rational(text: str) -> Fraction:
    """Parse ``[-]int[/posint]`` (ASCII, no spaces) into a reduced Fraction."""
    if not text:
        raise RationalParseError(text, 0, "empty input")
    pos = 0
    if text[0] in "+-":
        pos = 1
    start = pos
    while pos < len(text) and text[pos].isascii() and text[pos].isdigit():
        pos += 1
    if pos == start:
        raise RationalParseError(text, pos, "expected digit")
    num = int(text[start:pos])
    den = 1
    if pos < len(text):
        if text[pos] != "/":
            raise RationalParseError(text, pos, f"unexpected character {text[pos]!r}")
        pos += 1
        dstart = pos
        while pos < len(text) and text[pos].isascii() and text[pos].isdigit():
            pos += 1
        if pos == dstart:
            raise RationalParseError(text, pos, "expected denominator digit")
        if pos < len(text):
            raise RationalParseError(text, pos, f"unexpected character {text[pos]!r}")
        den = int(text[dstart:pos])
        if den == 0:
            raise RationalParseError(text, dstart, "zero denominator")
    if text[0] == "-":
        num = -num
    return Fraction(num, den)


def render_rational(value: Fraction | int) -> str:
    """Canonical text: ``p`` for integers, else ``p/q`` in lowest terms."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value: Fraction | int | str) -> Fraction:
    """Coerce ints, Fractions and canonical strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")
