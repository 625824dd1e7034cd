"""Exact arithmetic in Q and in real quadratic fields Q(sqrt d).

Every real parameter of a domain (exponents, log-radii, ratios of
log-radii) is an element ``x0 + x1*sqrt(d)`` with rational ``x0, x1``.
Values are canonical: ``x1 == 0`` forces ``d == 0``, so equal values
always have equal representations and hash alike.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

__all__ = [
    "QuadExt",
    "FieldError",
    "IncompatibleRadicands",
    "NonSquarefreeRadicand",
    "ElementSyntaxError",
    "sign",
    "is_rational",
    "parse",
    "format_element",
]

Number = Union[int, Fraction, "QuadExt"]

SQRT = "√"


class FieldError(ArithmeticError):
    pass


class IncompatibleRadicands(FieldError):
    pass


class NonSquarefreeRadicand(FieldError, ValueError):
    pass


class ElementSyntaxError(ValueError):
    """Malformed field element; ``position`` is the 0-based offending index."""

    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        self.message = message
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


@lru_cache(maxsize=None)
def _check_radicand(d: int) -> int:
    if not isinstance(d, int) or isinstance(d, bool):
        raise NonSquarefreeRadicand(f"radicand must be an integer, got {d!r}")
    if d == 0:
        return 0
    if d < 2:
        raise NonSquarefreeRadicand(f"radicand must be 0 or a squarefree integer >= 2, got {d}")
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            raise NonSquarefreeRadicand(f"radicand {d} is divisible by {f * f}")
        f += 1
    return d


class QuadExt:
    """An element ``x0 + x1*sqrt(d)`` of Q or Q(sqrt d), immutable."""

    __slots__ = ("_x0", "_x1", "_d")

    def __init__(self, x0=0, x1=0, d: int = 0):
        _check_radicand(d)
        x0 = Fraction(x0)
        x1 = Fraction(x1)
        if x1 == 0:
            d = 0
        elif d == 0:
            raise NonSquarefreeRadicand("an irrational part needs a radicand d >= 2")
        self._x0 = x0
        self._x1 = x1
        self._d = d

    @classmethod
    def _raw(cls, x0: Fraction, x1: Fraction, d: int) -> QuadExt:
        # trusted fast path: d already validated, canonicalise only
        self = object.__new__(cls)
        if x1 == 0:
            d = 0
        self._x0 = x0
        self._x1 = x1
        self._d = d
        return self

    @classmethod
    def sqrt(cls, d: int) -> QuadExt:
        return cls(0, 1, d)

    @classmethod
    def coerce(cls, value: Number) -> QuadExt:
        if isinstance(value, QuadExt):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._raw(Fraction(value), Fraction(0), 0)
        raise TypeError(f"cannot convert {type(value).__name__} to QuadExt")

    x0 = property(lambda self: self._x0)
    x1 = property(lambda self: self._x1)
    d = property(lambda self: self._d)

    def is_rational(self) -> bool:
        return self._x1 == 0

    def conjugate(self) -> QuadExt:
        return QuadExt._raw(self._x0, -self._x1, self._d)

    def norm(self) -> Fraction:
        return self._x0 * self._x0 - self._x1 * self._x1 * self._d

    def sign(self) -> int:
        a, b = self._x0, self._x1
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * self._d
        return sa if diff > 0 else sb

    def as_fraction(self) -> Fraction:
        if self._x1:
            raise ValueError(f"{self} is irrational")
        return self._x0

    def is_integer(self) -> bool:
        return self._x1 == 0 and self._x0.denominator == 1

    def __float__(self) -> float:
        if not self._x1:
            return float(self._x0)
        return float(self._x0) + float(self._x1) * math.sqrt(self._d)

    def __bool__(self) -> bool:
        return bool(self._x0) or bool(self._x1)

    def __hash__(self) -> int:
        if not self._x1:
            return hash(self._x0)
        return hash((self._x0, self._x1, self._d))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self._x1 and self._x0 == other
        if isinstance(other, QuadExt):
            return self._x0 == other._x0 and self._x1 == other._x1 and self._d == other._d
        return NotImplemented

    def _radicand_with(self, other: QuadExt) -> int:
        if self._d == other._d or not other._d:
            return self._d
        if not self._d:
            return other._d
        raise IncompatibleRadicands(
            f"cannot combine elements of Q(√{self._d}) and Q(√{other._d})"
        )

    def __add__(self, other: Number) -> QuadExt:
        if not isinstance(other, QuadExt):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return QuadExt._raw(self._x0 + other, self._x1, self._d)
        d = self._radicand_with(other)
        return QuadExt._raw(self._x0 + other._x0, self._x1 + other._x1, d)

    __radd__ = __add__

    def __neg__(self) -> QuadExt:
        return QuadExt._raw(-self._x0, -self._x1, self._d)

    def __pos__(self) -> QuadExt:
        return self

    def __abs__(self) -> QuadExt:
        return -self if self.sign() < 0 else self

    def __sub__(self, other: Number) -> QuadExt:
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> QuadExt:
        return (-self) + other

    def __mul__(self, other: Number) -> QuadExt:
        if not isinstance(other, QuadExt):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return QuadExt._raw(self._x0 * other, self._x1 * other, self._d)
        d = self._radicand_with(other)
        a0, a1, b0, b1 = self._x0, self._x1, other._x0, other._x1
        return QuadExt._raw(a0 * b0 + a1 * b1 * d, a0 * b1 + a1 * b0, d)

    __rmul__ = __mul__

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(√d)")
        return QuadExt._raw(self._x0 / n, -self._x1 / n, self._d)

    def __truediv__(self, other: Number) -> QuadExt:
        if not isinstance(other, QuadExt):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(√d)")
            return QuadExt._raw(self._x0 / other, self._x1 / other, self._d)
        self._radicand_with(other)
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> QuadExt:
        return QuadExt.coerce(other) / self

    def __pow__(self, n: int) -> QuadExt:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExt._raw(Fraction(1), Fraction(0), 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        if not self._x1:
            return f"QuadExt({self._x0!s})"
        return f"QuadExt({self._x0!s}, {self._x1!s}, d={self._d})"

    def __str__(self) -> str:
        if not self._x1:
            return str(self._x0)
        return f"{format_element(self)}{self._d}"


def sign(a: Number) -> int:
    return QuadExt.coerce(a).sign()


def is_rational(a: Number) -> bool:
    return QuadExt.coerce(a).is_rational()


def _scan_rational(text: str, pos: int) -> tuple[Fraction, int]:
    start = pos
    if pos < len(text) and text[pos] == "-":
        pos += 1
    digits_at = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == digits_at:
        raise ElementSyntaxError(text, pos, "expected digits")
    num = int(text[start:pos])
    den = 1
    if pos < len(text) and text[pos] == "/":
        pos += 1
        den_at = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == den_at:
            raise ElementSyntaxError(text, pos, "expected denominator digits")
        den = int(text[den_at:pos])
        if den == 0:
            raise ElementSyntaxError(text, den_at, "zero denominator")
    return Fraction(num, den), pos


def parse(text: str, d: int = 0) -> QuadExt:
    """Parse ``RAT`` or ``RAT SIGN RAT √`` with the radicand supplied separately.

    >>> parse("3+2√", 2)
    QuadExt(3, 2, d=2)
    >>> parse("-1/2")
    QuadExt(-1/2)
    """
    _check_radicand(d)
    if not isinstance(text, str):
        raise ElementSyntaxError(repr(text), 0, "element must be a string")
    text = text.strip()
    x0, pos = _scan_rational(text, 0)
    if pos == len(text):
        return QuadExt(x0)
    if text[pos] not in "+-":
        raise ElementSyntaxError(text, pos, "expected '+' or '-'")
    negate = text[pos] == "-"
    pos += 1
    x1, pos = _scan_rational(text, pos)
    if text.startswith(SQRT, pos):
        pos += len(SQRT)
    elif text.startswith("sqrt", pos):
        pos += 4
    else:
        raise ElementSyntaxError(text, pos, f"expected '{SQRT}'")
    if pos != len(text):
        raise ElementSyntaxError(text, pos, "trailing characters")
    if negate:
        x1 = -x1
    if x1 and d == 0:
        raise ElementSyntaxError(text, pos - 1, "irrational part given but radicand is 0")
    return QuadExt(x0, x1, d if x1 else 0)


def format_element(a: Number) -> str:
    """Canonical text form; the radicand is not written."""
    a = QuadExt.coerce(a)
    if a.is_rational():
        return str(a.x0)
    op = "-" if a.x1 < 0 else "+"
    return f"{a.x0}{op}{abs(a.x1)}{SQRT}"
