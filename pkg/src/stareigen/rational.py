"""Text form of exact rationals: ``"p/q"`` or a bare integer, never a float."""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(value) -> Fraction:
    """Parse an int or a string ``"p"``/``"p/q"``; floats and decimals are rejected."""
    if isinstance(value, bool):
        raise ValueError(f"invalid rational {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"invalid rational {value!r}: expected an integer or a 'p/q' string")
    m = _RATIONAL_RE.match(value)
    if not m:
        raise ValueError(f"invalid rational {value!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"invalid rational {value!r}: zero denominator")
    return Fraction(num, den)


def format_rational(x) -> str:
    return str(Fraction(x))
