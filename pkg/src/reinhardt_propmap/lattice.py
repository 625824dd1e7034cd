"""Integer structure over quadratic irrationals.

Membership in ``Z + beta*Z``, Bezout pairs, and integer kernels of small
rational systems. Values drawn from two different quadratic fields are
handled by :class:`Biquad`, coordinates over ``{1, √d1, √d2, √d1·√d2}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence, Union

from .field import IncompatibleRadicands, QuadExt

__all__ = [
    "Biquad",
    "Representation",
    "QuadrupleLattice",
    "NotCoprime",
    "lift",
    "mixed_mul",
    "mixed_div",
    "reduce_value",
    "represent",
    "bezout",
    "solve_ratio",
    "integer_kernel",
    "hermite_rows",
]

Value = Union[QuadExt, "Biquad"]


class NotCoprime(ValueError):
    pass


class Biquad:
    """Element of Q(√d1, √d2) for distinct squarefree ``d1, d2 >= 2``."""

    __slots__ = ("d1", "d2", "c")

    def __init__(self, d1: int, d2: int, coords: Sequence):
        if d1 == d2 or d1 < 2 or d2 < 2:
            raise ValueError("Biquad needs two distinct irrational radicands")
        self.d1, self.d2 = d1, d2
        self.c = tuple(Fraction(x) for x in coords)

    @classmethod
    def from_quad(cls, a: QuadExt, d1: int, d2: int) -> Biquad:
        if a.is_rational():
            return cls(d1, d2, (a.x0, 0, 0, 0))
        if a.d == d1:
            return cls(d1, d2, (a.x0, a.x1, 0, 0))
        if a.d == d2:
            return cls(d1, d2, (a.x0, 0, a.x1, 0))
        raise IncompatibleRadicands(f"Q(√{a.d}) is not inside Q(√{d1}, √{d2})")

    def __add__(self, other: Biquad) -> Biquad:
        return Biquad(self.d1, self.d2, [x + y for x, y in zip(self.c, other.c)])

    def __neg__(self) -> Biquad:
        return Biquad(self.d1, self.d2, [-x for x in self.c])

    def __sub__(self, other: Biquad) -> Biquad:
        return self + (-other)

    def __mul__(self, other: Biquad) -> Biquad:
        a, b = self.c, other.c
        p, q = self.d1, self.d2
        # basis 1, s=√p, t=√q, u=st with s²=p, t²=q, su=pt, tu=qs, u²=pq
        c0 = a[0] * b[0] + p * a[1] * b[1] + q * a[2] * b[2] + p * q * a[3] * b[3]
        c1 = a[0] * b[1] + a[1] * b[0] + q * (a[2] * b[3] + a[3] * b[2])
        c2 = a[0] * b[2] + a[2] * b[0] + p * (a[1] * b[3] + a[3] * b[1])
        c3 = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1]
        return Biquad(p, q, (c0, c1, c2, c3))

    def _conj(self, s1: int, s2: int) -> Biquad:
        c = self.c
        return Biquad(self.d1, self.d2, (c[0], s1 * c[1], s2 * c[2], s1 * s2 * c[3]))

    def inverse(self) -> Biquad:
        others = self._conj(-1, 1) * self._conj(1, -1) * self._conj(-1, -1)
        norm = (self * others).c[0]
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(√d1, √d2)")
        return Biquad(self.d1, self.d2, [x / norm for x in others.c])

    def __eq__(self, other) -> bool:
        if isinstance(other, Biquad):
            return (self.d1, self.d2, self.c) == (other.d1, other.d2, other.c)
        return NotImplemented

    def __hash__(self):
        return hash((self.d1, self.d2, self.c))

    def to_quad(self) -> QuadExt | None:
        """The same value as a QuadExt, or None if it is genuinely biquadratic."""
        c0, c1, c2, c3 = self.c
        if not c3 and not c2:
            return QuadExt(c0, c1, self.d1 if c1 else 0)
        if not c3 and not c1:
            return QuadExt(c0, c2, self.d2)
        if not c1 and not c2:
            # √d1·√d2 = s·√e with e squarefree
            prod_ = self.d1 * self.d2
            s = 1
            f = 2
            while f * f <= prod_:
                while prod_ % (f * f) == 0:
                    prod_ //= f * f
                    s *= f
                f += 1
            return QuadExt(c0, c3 * s, prod_)
        return None

    def __float__(self) -> float:
        c = self.c
        s, t = math.sqrt(self.d1), math.sqrt(self.d2)
        return float(c[0]) + float(c[1]) * s + float(c[2]) * t + float(c[3]) * s * t

    def __repr__(self) -> str:
        return f"Biquad(d1={self.d1}, d2={self.d2}, {[str(x) for x in self.c]})"


def _radicands(*values: Value) -> list[int]:
    ds: set[int] = set()
    for v in values:
        if isinstance(v, Biquad):
            ds.update((v.d1, v.d2))
        elif v.d:
            ds.add(v.d)
    return sorted(ds)


def lift(a: Value, d1: int, d2: int) -> Biquad:
    if isinstance(a, Biquad):
        if {a.d1, a.d2} != {d1, d2}:
            raise IncompatibleRadicands("different biquadratic fields")
        if a.d1 == d1:
            return a
        c = a.c
        return Biquad(d1, d2, (c[0], c[2], c[1], c[3]))
    return Biquad.from_quad(a, d1, d2)


def reduce_value(a: Value) -> Value:
    if isinstance(a, Biquad):
        q = a.to_quad()
        return a if q is None else q
    return a


def _combine(a: Value, b: Value, op) -> Value:
    if isinstance(a, QuadExt) and isinstance(b, QuadExt):
        try:
            return op(a, b)
        except IncompatibleRadicands:
            pass
    ds = _radicands(a, b)
    if len(ds) > 2:
        raise IncompatibleRadicands("more than two quadratic radicands")
    d1, d2 = ds
    return reduce_value(op(lift(a, d1, d2), lift(b, d1, d2)))


def mixed_mul(a: Value, b: Value) -> Value:
    """Product of two values that may live in different quadratic fields."""
    return _combine(a, b, lambda x, y: x * y)


def mixed_div(a: Value, b: Value) -> Value:
    def div(x, y):
        return x / y if isinstance(x, QuadExt) else x * y.inverse()

    return _combine(a, b, div)


@dataclass(frozen=True)
class Representation:
    """``value == k + l*beta``, re-checked exactly at construction."""

    k: int
    l: int
    unique: bool
    value: QuadExt = field(repr=False, compare=False)
    beta: QuadExt = field(repr=False, compare=False)

    def __post_init__(self):
        if self.beta * self.l + self.k != self.value:
            raise AssertionError(f"{self.value} != {self.k} + {self.l}·({self.beta})")
        if not self.beta.is_rational() and not self.unique:
            raise AssertionError("representation over irrational beta must be unique")


def represent(x: Value, beta: QuadExt) -> Representation | None:
    """Find integers ``k, l`` with ``x = k + l*beta``, or None."""
    x = reduce_value(x)
    if isinstance(x, Biquad):
        # Z + beta Z lies in one quadratic field
        return None
    if not beta.is_rational():
        if x.is_rational():
            if x.x0.denominator != 1:
                return None
            return Representation(int(x.x0), 0, True, x, beta)
        if x.d != beta.d:
            return None
        l = x.x1 / beta.x1
        k = x.x0 - l * beta.x0
        if l.denominator != 1 or k.denominator != 1:
            return None
        return Representation(int(k), int(l), True, x, beta)
    if not x.is_rational():
        return None
    b = beta.x0
    p, q = b.numerator, b.denominator
    qx = q * x.x0
    if qx.denominator != 1:
        return None
    # canonical representative 0 <= l < q: l*p ≡ q*x (mod q)
    l = 0 if q == 1 else (int(qx) * pow(p, -1, q)) % q
    k = x.x0 - l * b
    return Representation(int(k), l, False, x, beta)


def bezout(p: int, q: int) -> tuple[int, int]:
    """Integers ``(m, n)`` with ``p*m - q*n == 1``; ``0 <= m < q`` when ``q > 1``."""
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {math.gcd(p, q)}")
    if q == 1:
        return 1, p - 1
    m = pow(p, -1, q)
    n = (p * m - 1) // q
    return m, n


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of an integer matrix, zero rows dropped."""
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    top = 0
    for col in range(ncols):
        if top == len(a):
            break
        # gcd-eliminate column col below row top
        while True:
            nz = [i for i in range(top, len(a)) if a[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[top], a[piv] = a[piv], a[top]
            done = True
            for i in range(top + 1, len(a)):
                if a[i][col]:
                    f = a[i][col] // a[top][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[top])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if top < len(a) and a[top][col] != 0:
            if a[top][col] < 0:
                a[top] = [-x for x in a[top]]
            pv = a[top][col]
            for i in range(top):
                f = a[i][col] // pv
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[top])]
            top += 1
    return [tuple(r) for r in a[:top]]


def integer_kernel(matrix: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Z-basis of ``{v in Z^n : M v = 0}`` in Hermite normal form.

    Rows are cleared of denominators, then unimodular column operations
    reduce ``M``; the transform columns over zero columns span the kernel.
    """
    rows = [[Fraction(x) for x in r] for r in matrix]
    if not rows:
        raise ValueError("empty matrix")
    n = len(rows[0])
    a = []
    for r in rows:
        den = math.lcm(*(x.denominator for x in r))
        a.append([int(x * den) for x in r])
    # columns as (A-part, U-part)
    cols = [([a[i][j] for i in range(len(a))], [int(i == j) for i in range(n)]) for j in range(n)]
    pivot = 0
    for i in range(len(a)):
        while True:
            nz = [j for j in range(pivot, n) if cols[j][0][i] != 0]
            if len(nz) <= 1:
                break
            jmin = min(nz, key=lambda j: abs(cols[j][0][i]))
            ca, cu = cols[jmin]
            for j in nz:
                if j == jmin:
                    continue
                f = cols[j][0][i] // ca[i]
                cols[j] = (
                    [x - f * y for x, y in zip(cols[j][0], ca)],
                    [x - f * y for x, y in zip(cols[j][1], cu)],
                )
        nz = [j for j in range(pivot, n) if cols[j][0][i] != 0]
        if nz:
            j = nz[0]
            cols[pivot], cols[j] = cols[j], cols[pivot]
            pivot += 1
    basis = [cols[j][1] for j in range(pivot, n)]
    for v in basis:
        assert all(sum(x * y for x, y in zip(r, v)) == 0 for r in a)
    return hermite_rows(basis)


def _coords(values: Sequence[Value], radicands: Sequence[int]) -> list[list[Fraction]]:
    """Coordinates of values over a common Q-basis, one column per value."""
    if len(radicands) <= 1:
        quads = [v if isinstance(v, QuadExt) else v.to_quad() for v in values]
        return [[q.x0 for q in quads], [q.x1 for q in quads]]
    d1, d2 = radicands
    lifted = [lift(v, d1, d2).c for v in values]
    return [[c[i] for c in lifted] for i in range(4)]


@dataclass(frozen=True)
class QuadrupleLattice:
    """All integer ``(k1, k2, l1, l2)`` with ``alpha*(k1 + l1*beta) == k2 + l2*beta``."""

    basis: tuple[tuple[int, int, int, int], ...]
    alpha: QuadExt = field(repr=False)
    beta: QuadExt = field(repr=False)

    def __post_init__(self):
        for v in self.basis:
            if not self.satisfies(v):
                raise AssertionError(f"basis vector {v} violates the ratio equation")
        if len(self.basis) > 1:
            # independence over Q
            if len(hermite_rows(self.basis)) != len(self.basis):
                raise AssertionError("basis vectors are dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def satisfies(self, v: Sequence[int]) -> bool:
        k1, k2, l1, l2 = v
        lhs = mixed_mul(self.alpha, self.beta * l1 + k1)
        rhs = self.beta * l2 + k2
        if isinstance(lhs, QuadExt):
            return lhs == rhs
        return lhs == lift(rhs, lhs.d1, lhs.d2)

    def contains(self, v: Sequence[int]) -> bool:
        # the lattice is the full solution set
        return self.satisfies(v)

    def level_exponent(self, v: Sequence[int]) -> QuadExt:
        """``k1 + l1*beta``: the power the map raises the level function to."""
        return self.beta * v[2] + v[0]

    def positive_members(self, radius: int = 1) -> list[tuple[int, int, int, int]]:
        """Nonzero combinations with coefficients in [-radius, radius], sign-normalised
        so that ``k1 + l1*beta > 0``; sorted by size then lexicographically."""
        seen = set()
        for coeffs in product(range(-radius, radius + 1), repeat=self.rank):
            if not any(coeffs):
                continue
            v = tuple(sum(c * b[i] for c, b in zip(coeffs, self.basis)) for i in range(4))
            s = self.level_exponent(v).sign()
            if s == 0:
                continue
            if s < 0:
                v = tuple(-x for x in v)
            seen.add(v)
        return sorted(seen, key=lambda v: (max(map(abs, v)), sum(map(abs, v)), tuple(-x for x in v)))


def solve_ratio(alpha: QuadExt, beta: QuadExt) -> QuadrupleLattice:
    """Integer solutions of ``alpha*k1 + alpha*beta*l1 - k2 - beta*l2 = 0``."""
    ds = _radicands(alpha, beta)
    if len(ds) == 2:
        a, b = lift(alpha, *ds), lift(beta, *ds)
        coeffs = [a, lift(QuadExt(-1), *ds), a * b, -b]
    else:
        coeffs = [alpha, QuadExt(-1), alpha * beta, -beta]
    basis = integer_kernel(_coords(coeffs, ds))
    return QuadrupleLattice(tuple(basis), alpha, beta)
