"""Rational recognition and exact length parsing.

Flat-band mechanisms need exact rationality of edge lengths relative to
pi; floating-point inputs are mapped to rationals by continued fractions
with a bounded denominator and a tight match tolerance.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Optional

MAX_DENOMINATOR = 10 ** 6
MATCH_TOL = 1e-12

_PI_RE = re.compile(r"""^\s*(?P<coef>[+-]?(\d+(\.\d*)?|\.\d+)?)\s*
                        (?P<pi>pi)?\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$""",
                    re.VERBOSE | re.IGNORECASE)


def recognize_rational(x: float, max_denominator: int = MAX_DENOMINATOR,
                       tol: float = MATCH_TOL) -> Optional[Fraction]:
    """Best rational p/q with q <= max_denominator, or None if no rational
    approximates x within tol."""
    if not math.isfinite(x):
        return None
    frac = Fraction(x).limit_denominator(max_denominator)
    if abs(x - float(frac)) <= tol * max(1.0, abs(x)):
        return frac
    return None


def recognize_pi_multiple(length: float, max_denominator: int = MAX_DENOMINATOR,
                          tol: float = MATCH_TOL) -> Optional[Fraction]:
    """Recognize length = (p/q) * pi; returns p/q or None."""
    return recognize_rational(length / math.pi, max_denominator, tol)


def parse_length(text: str) -> float:
    """Parse a CLI length: plain float ("2.0944", "1e-3") or exact pi
    multiple ("2pi/3", "pi", "0.5pi", "pi/5")."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text)
    if not m or not m.group("pi"):
        raise ValueError(f"cannot parse length {text!r}")
    coef_s = m.group("coef")
    coef = float(coef_s) if coef_s not in ("", "+", "-") else float(coef_s + "1")
    value = coef * math.pi
    if m.group("den"):
        value /= float(m.group("den"))
    return value
