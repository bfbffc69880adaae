from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfinhier import InputError, format_rational, parse_rational


def test_parse_fraction_forms():
    assert parse_rational("12/25") == Fraction(12, 25)
    assert parse_rational(" 3 / 5 ") == Fraction(3, 5)
    assert parse_rational("1") == 1
    assert parse_rational("0.47") == Fraction(47, 100)


def test_parse_rejects_garbage():
    for bad in ("", "a/b", "1/0", "1//2", "one half"):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_format_lowest_terms_and_integers():
    assert format_rational(Fraction(24, 50)) == "12/25"
    assert format_rational(Fraction(3, 1)) == "3"
    assert format_rational(Fraction(0)) == "0"


@given(st.fractions())
def test_round_trip(x):
    assert parse_rational(format_rational(x)) == x
