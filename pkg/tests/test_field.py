from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from reinhardt_propmap.field import (
    ElementSyntaxError,
    IncompatibleRadicands,
    NonSquarefreeRadicand,
    QuadExt,
    format_element,
    is_rational,
    parse,
    sign,
)

from conftest import irrational, quad

getcontext().prec = 80

R2 = QuadExt.sqrt(2)


def decimal_value(a: QuadExt) -> Decimal:
    # independent high-precision evaluation for the sign oracle
    v = Decimal(a.x0.numerator) / Decimal(a.x0.denominator)
    if a.x1:
        v += Decimal(a.x1.numerator) / Decimal(a.x1.denominator) * Decimal(a.d).sqrt()
    return v


def test_arithmetic_examples():
    assert (3 + 2 * R2) + (1 - R2) == 4 + R2
    assert (1 + R2) * (3 + 2 * R2) == 7 + 5 * R2
    assert 1 / (3 + 2 * R2) == 3 - 2 * R2


def test_sign_examples():
    assert sign(3 - 2 * R2) == 1
    assert sign(0) == 0
    assert sign(1 - R2) == -1


def test_is_rational_examples():
    assert is_rational(Fraction(7, 3))
    assert not is_rational(R2)
    diff = R2 - R2
    assert is_rational(diff) and diff.d == 0


def test_parse_examples():
    assert parse("3+2√", 2) == 3 + 2 * R2
    assert parse("-1/2") == QuadExt(Fraction(-1, 2))
    a = parse("0+4/2√", 2)
    assert a == 2 * R2 and format_element(a) == "0+2√"
    assert parse("1-3sqrt", 5) == 1 - 3 * QuadExt.sqrt(5)


@pytest.mark.parametrize("d", [4, 8, 9, 12, 1, -3])
def test_non_squarefree_rejected(d):
    with pytest.raises(NonSquarefreeRadicand):
        QuadExt(0, 1, d)


@pytest.mark.parametrize("text,pos", [("3+√", 2), ("", 0), ("1/0", 2), ("1+2", 3), ("1+2√x", 4), ("a", 0)])
def test_parse_errors_have_positions(text, pos):
    with pytest.raises(ElementSyntaxError) as exc:
        parse(text, 2)
    assert exc.value.position == pos
    assert "^" in str(exc.value)


def test_irrational_text_needs_radicand():
    with pytest.raises(ElementSyntaxError):
        parse("1+1√", 0)


def test_mixed_radicands_rejected():
    with pytest.raises(IncompatibleRadicands):
        R2 + QuadExt.sqrt(3)
    with pytest.raises(ZeroDivisionError):
        R2 / QuadExt(0)


def test_fractions_kept_in_lowest_terms():
    a = QuadExt(Fraction(4, -6), Fraction(10, 4), 3)
    assert a.x0 == Fraction(-2, 3) and a.x0.denominator > 0
    assert a.x1 == Fraction(5, 2)


@given(st.sampled_from([2, 3, 5]).flatmap(lambda d: st.tuples(quad(d), quad(d), quad(d))))
def test_ring_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(st.sampled_from([2, 3, 7]).flatmap(lambda d: st.tuples(quad(d), quad(d))))
def test_sign_multiplicative(t):
    a, b = t
    assert sign(a) * sign(b) == sign(a * b)


@given(quad())
def test_sign_matches_decimal_oracle(a):
    v = decimal_value(a)
    expected = (v > 0) - (v < 0)
    assert sign(a) == expected


@given(st.sampled_from([2, 3, 5]).flatmap(lambda d: st.tuples(quad(d), quad(d, nonzero=True))))
def test_division_inverts_multiplication(t):
    a, b = t
    assert (a * b) / b == a


@given(quad())
def test_format_parse_canonical(a):
    text = format_element(a)
    assert format_element(parse(text, a.d)) == text
    assert parse(text, a.d) == a


@given(irrational())
def test_conjugate_norm(a):
    assert a * a.conjugate() == a.norm()
    assert hash(a) == hash(parse(format_element(a), a.d))


@given(quad(), quad())
def test_ordering_consistent_with_float(a, b):
    try:
        lt = a < b
    except IncompatibleRadicands:
        assume(False)
    if abs(float(a) - float(b)) > 1e-9:
        assert lt == (float(a) < float(b))
