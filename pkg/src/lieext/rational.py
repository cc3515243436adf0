"""Exact rational scalars.

Everything in this package computes over Python's ``Fraction``, which keeps
values in lowest terms with a positive denominator.  This module pins the
text form used at every boundary (CLI flags, JSON payloads, CSV cells):
"p/q" or "p" with an optional leading minus, nothing else.  In particular
decimal and exponent notation are rejected so that no float ever sneaks in.
"""

from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def rational(numerator: int, denominator: int = 1) -> Fraction:
    """Canonical rational from an integer pair.  Rejects a zero denominator."""
    if denominator == 0:
        raise ValueError("zero denominator")
    return Fraction(numerator, denominator)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p".  Anything else (floats, blanks, "1/0") is an error."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r} (expected p or p/q)")
    if "/" in text:
        num, den = text.split("/")
        return rational(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    """Canonical text form, the exact inverse of parse_rational."""
    return str(Fraction(value))


def is_integer(value: Fraction) -> bool:
    return Fraction(value).denominator == 1
