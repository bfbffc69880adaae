"""Exact rational scalar type and its text round-trip.

All kernel arithmetic is exact; floats never enter any computation. The
scalar type is the stdlib Fraction, re-exported under a kernel-local alias so
call sites stay uniform and the representation could be swapped without
touching them.
"""

from fractions import Fraction

from .errors import InputError

ExactRational = Fraction

ZERO = ExactRational(0)
ONE = ExactRational(1)
HALF = ExactRational(1, 2)


def parse_rational(text: str) -> ExactRational:
    """Parse "a/b", an integer literal, or a decimal literal, exactly.

    Decimal strings go through Fraction's exact string constructor, so
    "0.47" means 47/100, not the nearest binary float.
    """
    if isinstance(text, ExactRational):
        return text
    if isinstance(text, int):
        return ExactRational(text)
    if not isinstance(text, str):
        raise InputError(f"cannot parse rational from {type(text).__name__}")
    s = text.strip()
    if not s:
        raise InputError("empty rational literal")
    if "/" in s:
        num_s, _, den_s = s.partition("/")
        try:
            num = int(num_s.strip())
            den = int(den_s.strip())
        except ValueError:
            raise InputError(f"malformed rational literal: {text!r}") from None
        if den == 0:
            raise InputError(f"zero denominator: {text!r}")
        return ExactRational(num, den)
    try:
        return ExactRational(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"malformed rational literal: {text!r}") from None


def format_rational(value: ExactRational) -> str:
    """Canonical text form: "a/b" in lowest terms, or "a" when integral."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
