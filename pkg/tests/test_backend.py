from fractions import Fraction

import pytest

from copekit.backend import (
    BackendError,
    floating,
    format_scalar,
    parse_scalar,
    rational,
)


def test_rational_coercion():
    be = rational()
    assert be.coerce("1/3") == Fraction(1, 3)
    assert be.coerce(2) == Fraction(2)
    assert be.coerce(Fraction(5, 7)) == Fraction(5, 7)
    assert be.coerce(0.5) == Fraction(1, 2)


def test_float_equality_uses_eps():
    be = floating(1e-9)
    assert be.eq(0.5, 0.5 + 1e-10)
    assert not be.eq(0.5, 0.5 + 1e-8)
    assert be.is_zero(1e-12)
    assert be.leq(1.0 + 1e-12, 1.0)


def test_rational_equality_is_exact():
    be = rational()
    assert be.eq(Fraction(1, 3), Fraction(2, 6))
    assert not be.eq(Fraction(1, 3), Fraction(333333333, 1000000000))


def test_backend_validation():
    with pytest.raises(BackendError):
        floating(2.0)
    with pytest.raises(BackendError):
        floating(0.0)


def test_scalar_parse_format_round_trip():
    be = rational()
    for text in ["0", "1", "1/2", "7/3"]:
        assert format_scalar(parse_scalar(text, be), be) == text
    bf = floating()
    assert parse_scalar(0.25, bf) == 0.25
    with pytest.raises(BackendError):
        parse_scalar(0.25, be)  # rational documents use strings
    with pytest.raises(BackendError):
        parse_scalar("1/2", bf)  # float documents use numbers
