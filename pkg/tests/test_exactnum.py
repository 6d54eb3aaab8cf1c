from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itbasis.exactnum import (
    ONE,
    ZERO,
    ExactReal,
    as_exact,
    sqrt_rational,
    squarefree_part,
)

radicands = st.sampled_from([1, 2, 3, 5, 6, 7, 10, 15])
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def exact(draw) -> ExactReal:
    terms = draw(st.dictionaries(radicands, fractions, max_size=3))
    return ExactReal(terms)


nonzero = exact().filter(bool)


def test_squarefree_part():
    assert squarefree_part(72) == (6, 2)
    assert squarefree_part(1) == (1, 1)
    assert squarefree_part(30) == (1, 30)


def test_sqrt_normalizes():
    assert sqrt_rational(8) == 2 * sqrt_rational(2)
    assert sqrt_rational(Fraction(1, 2)) == sqrt_rational(2) / 2
    assert sqrt_rational(24) == 2 * sqrt_rational(6)
    assert sqrt_rational(144) == ExactReal.rational(12)
    with pytest.raises(ValueError):
        sqrt_rational(0)


def test_radical_products():
    assert sqrt_rational(2) * sqrt_rational(3) == sqrt_rational(6)
    assert sqrt_rational(6) * sqrt_rational(3) == 3 * sqrt_rational(2)
    assert (sqrt_rational(2) + sqrt_rational(3)) ** 2 == 5 + 2 * sqrt_rational(6)


def test_inverse_of_multiradical():
    x = 1 + sqrt_rational(2) + sqrt_rational(3)
    assert x * x.invert() == ONE
    assert (sqrt_rational(2) - sqrt_rational(3)).invert() == -(sqrt_rational(2) + sqrt_rational(3))
    with pytest.raises(ZeroDivisionError):
        ZERO.invert()


def test_sign_is_exact_for_near_cancellation():
    # 99 - 70 sqrt(2) is about 0.00505, 577 - 408 sqrt(2) about 0.0009
    assert (99 - 70 * sqrt_rational(2)).sign() == 1
    assert (408 * sqrt_rational(2) - 577).sign() == -1
    assert sqrt_rational(3) > sqrt_rational(2)
    assert sqrt_rational(2) + sqrt_rational(3) < sqrt_rational(10)


def test_text_and_json_roundtrip():
    x = Fraction(-3, 4) + 2 * sqrt_rational(3) - sqrt_rational(Fraction(1, 2))
    assert ExactReal.parse(str(x)) == x
    assert ExactReal.from_json(x.to_json()) == x
    assert ExactReal.parse("0") == ZERO
    with pytest.raises(ValueError):
        ExactReal.parse("sqrt(x)")


def test_as_exact_rejects_floats():
    assert as_exact(3) == ExactReal.rational(3)
    with pytest.raises(TypeError):
        as_exact(0.5)


@given(exact(), exact(), exact())
def test_field_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a - a == ZERO


@settings(max_examples=60)
@given(nonzero)
def test_multiplicative_inverse(a):
    assert a * a.invert() == ONE
    assert a / a == ONE


@given(exact(), exact())
def test_order_agrees_with_floats(a, b):
    fa, fb = float(a), float(b)
    if not math.isclose(fa, fb, abs_tol=1e-9):
        assert (a < b) == (fa < fb)
    assert (a == b) == ((a - b).sign() == 0)
    assert hash(a + b) == hash(b + a)
