"""Existence and enumeration of proper holomorphic maps between canonical domains.

:func:`decide` canonicalises both domains and dispatches on their
shapes. Every verdict carries a citation tag naming the result it rests
on (see :data:`CITATIONS`) and, when maps exist, a family descriptor from
which concrete members can be instantiated for numerical checks.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .domains import (
    CanonicalDomain,
    Classification,
    DomainSpec,
    InvalidSpec,
    Lower,
    MonomialMap,
    Tag,
    classify,
    identity_map,
)
from .field import QuadExt, format_element
from .lattice import (
    QuadrupleLattice,
    mixed_div,
    mixed_mul,
    reduce_value,
    represent,
    solve_ratio,
)

__all__ = [
    "CITATIONS",
    "Constraint",
    "Empty",
    "Unsupported",
    "MonomialFamily",
    "LatticeMonomialFamily",
    "PolynomialFiber",
    "LaurentFiber",
    "MonomialFiber",
    "FiberFamily",
    "FiberMap",
    "Instance",
    "Verdict",
    "decide",
    "irrational_annulus",
    "irrational_punctured",
    "irrational_elementary",
    "rational_pair",
]

# citation tag -> what the cited result establishes
CITATIONS = {
    "nq": "irrational annuli: maps exist iff log R/log r and alpha·log R/log r lie in Z + beta Z; "
          "all maps are monomial",
    "el*": "irrational punctured domains: maps exist iff alpha = (k2 + beta l2)/(k1 + beta l1)",
    "el": "irrational elementary domains: classification by signs of alpha, beta",
    "i": "same ratio type: lower bounds must both be positive, both negative, or both zero",
    "rozne": "domains of different ratio types admit no proper maps",
    "A": "annulus products: maps exist iff R = r^m, m natural",
    "A1": "no proper maps from an annulus times C onto an annulus times C*",
    "A2": "punctured disc products",
    "prop": "rational elementary domains: classified in the cited literature, not decided here",
}


@dataclass(frozen=True)
class Constraint:
    """Coefficient relation ``log|a| + beta*log|b| = 0``."""

    beta: QuadExt

    def solve_log_a(self, log_b) -> QuadExt:
        return -(self.beta * QuadExt.coerce(log_b))

    def holds(self, log_a, log_b) -> bool:
        return QuadExt.coerce(log_a) + self.beta * QuadExt.coerce(log_b) == 0

    def describe(self) -> str:
        return f"log|a| + ({self.beta})·log|b| = 0"

    def to_dict(self) -> dict:
        return {"relation": "log|a| + beta*log|b| = 0", "beta": format_element(self.beta)}


@dataclass(frozen=True)
class Empty:
    theorem: str
    reason: str
    kind = "empty"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "theorem": self.theorem, "reason": self.reason}


@dataclass(frozen=True)
class Unsupported:
    citation: str
    reason: str
    kind = "unsupported"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "citation": self.citation, "reason": self.reason}


Matrix = tuple[tuple[int, int], tuple[int, int]]


def _neg(E: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in E)


def _scale(E: Matrix, t: int) -> Matrix:
    return tuple(tuple(t * x for x in row) for row in E)


@dataclass(frozen=True)
class Instance:
    """A concrete member of a family.

    ``level_exponent`` is the power ``e`` in ``level(f(z)) = e * level(z)``
    for monomial members (None for fibre maps).
    """

    map: Union[MonomialMap, "FiberMap"]
    label: str
    level_exponent: QuadExt | None = None


@dataclass(frozen=True)
class MonomialFamily:
    """Maps ``(a z^E1, b z^E2)`` for each exponent matrix in ``branches``.

    With ``multiples`` set, every positive integer multiple of a branch is
    also a member.
    """

    branches: tuple[Matrix, ...]
    constraint: Constraint
    level_exponents: tuple[QuadExt, ...]
    free_phases: bool = True
    multiples: bool = False
    kind = "monomial"

    def __post_init__(self):
        for E in self.branches:
            if E[0][0] * E[1][1] - E[0][1] * E[1][0] == 0:
                raise ValueError(f"branch {E} has zero determinant")

    def member(self, branch: int = 0, log_b=0, phases=(0.0, 0.0), multiple: int = 1,
               log_a=None) -> Instance:
        E = self.branches[branch]
        if multiple != 1:
            if not self.multiples:
                raise ValueError("this family has no multiples")
            E = _scale(E, multiple)
        la = self.constraint.solve_log_a(log_b) if log_a is None else QuadExt.coerce(log_a)
        e = self.level_exponents[branch] * multiple
        return Instance(MonomialMap(E, (la, QuadExt.coerce(log_b)), phases),
                        f"branch {branch} E={[list(r) for r in E]}", e)

    def instances(self) -> list[Instance]:
        return [self.member(i) for i in range(len(self.branches))]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "branches": [[list(r) for r in E] for E in self.branches],
            "levelExponents": [format_element(e) for e in self.level_exponents],
            "constraint": self.constraint.to_dict(),
            "freePhases": self.free_phases,
            "multiples": self.multiples,
        }


@dataclass(frozen=True)
class LatticeMonomialFamily:
    """Maps ``(a z1^k1 z2^k2, b z1^l1 z2^l2)`` over lattice vectors with ``k1 + l1*beta > 0``."""

    lattice: QuadrupleLattice
    constraint: Constraint
    representatives: tuple[tuple[int, int, int, int], ...]
    positivity: str = "k1 + l1*beta > 0"
    kind = "lattice-monomial"

    def member(self, vector, log_b=0, phases=(0.0, 0.0), log_a=None) -> Instance:
        v = tuple(vector)
        if not self.lattice.contains(v):
            raise ValueError(f"{v} is not in the solution lattice")
        e = self.lattice.level_exponent(v)
        if e.sign() <= 0:
            raise ValueError(f"{v} violates {self.positivity}")
        k1, k2, l1, l2 = v
        la = self.constraint.solve_log_a(log_b) if log_a is None else QuadExt.coerce(log_a)
        return Instance(MonomialMap(((k1, k2), (l1, l2)), (la, QuadExt.coerce(log_b)), phases),
                        f"vector {v}", e)

    def instances(self) -> list[Instance]:
        return [self.member(v) for v in self.representatives]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lattice": {"basis": [list(v) for v in self.lattice.basis], "rank": self.lattice.rank,
                        "order": ["k1", "k2", "l1", "l2"]},
            "positivity": self.positivity,
            "constraint": self.constraint.to_dict(),
            "representatives": [list(v) for v in self.representatives],
        }


@dataclass(frozen=True)
class PolynomialFiber:
    """``w -> a_N(z) w^N + ... + a_0(z)``, the ``a_i`` never all vanishing."""

    default_coefficients: tuple[complex, ...] = (0, 1)
    kind = "polynomial"
    conditions = "N >= 1, a_0..a_N holomorphic on the base, |a_0(z)|+...+|a_N(z)| > 0"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "form": "a_N(z) w^N + ... + a_0(z)", "conditions": self.conditions,
                "default": {"N": len(self.default_coefficients) - 1,
                            "coefficients": [str(c) for c in self.default_coefficients]}}


@dataclass(frozen=True)
class LaurentFiber:
    """``w -> (a_N(z) w^N + ... + a_0(z)) / w^k`` with ``0 < k < N``."""

    default_coefficients: tuple[complex, ...] = (1, 0, 1)
    default_k: int = 1
    kind = "laurent"
    conditions = ("0 < k < N, a_i holomorphic on the base, |a_0|+...+|a_{k-1}| > 0 and "
                  "|a_{k+1}|+...+|a_N| > 0 everywhere")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "form": "(a_N(z) w^N + ... + a_0(z)) / w^k", "conditions": self.conditions,
                "default": {"N": len(self.default_coefficients) - 1, "k": self.default_k,
                            "coefficients": [str(c) for c in self.default_coefficients]}}


@dataclass(frozen=True)
class MonomialFiber:
    """``w -> a(z) w^k`` with ``a`` holomorphic and zero-free on the base."""

    default_k: int = 1
    kind = "monomial"
    conditions = "k nonzero integer, a holomorphic and nowhere zero on the base"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "form": "a(z) w^k", "conditions": self.conditions,
                "default": {"k": self.default_k, "a": "1"}}


Fiber = Union[PolynomialFiber, LaurentFiber, MonomialFiber]


@dataclass(frozen=True)
class FiberMap:
    """``(z, w) -> (e^{i theta} z^{eps*m}, fibre(w))`` with constant fibre coefficients.

    ``coefficients[i]`` multiplies ``w^(i - shift)``.
    """

    m: int
    coefficients: tuple[complex, ...]
    shift: int = 0
    epsilon: int = 1
    theta: float = 0.0

    def __call__(self, z) -> np.ndarray:
        pts = np.asarray(z, dtype=complex)
        single = pts.ndim == 1
        pts = pts.reshape(-1, 2)
        base = cmath.exp(1j * self.theta) * pts[:, 0] ** (self.epsilon * self.m)
        w = pts[:, 1]
        fib = np.zeros(len(pts), dtype=complex)
        for i, c in enumerate(self.coefficients):
            if c:
                fib = fib + c * w ** (i - self.shift)
        out = np.stack([base, fib], axis=1)
        return out[0] if single else out

    def describe(self) -> str:
        terms = " + ".join(f"({c})w^{i - self.shift}" for i, c in enumerate(self.coefficients) if c)
        return f"(e^{{i{self.theta:g}}} z^{self.epsilon * self.m}, {terms})"


@dataclass(frozen=True)
class FiberFamily:
    """``(e^{i theta} z^{±m}, fibre)``; ``base_degree`` None means every m in N."""

    base_degree: int | None
    base_form: str
    epsilons: tuple[int, ...]
    fiber: Fiber
    kind = "fiber"

    def member(self, m: int | None = None, epsilon: int = 1, theta: float = 0.0) -> Instance:
        if m is None:
            m = self.base_degree or 1
        elif self.base_degree is not None and m != self.base_degree:
            raise ValueError(f"base degree is fixed at {self.base_degree}")
        if epsilon not in self.epsilons:
            raise ValueError(f"epsilon {epsilon} not allowed")
        fb = self.fiber
        if isinstance(fb, PolynomialFiber):
            fm = FiberMap(m, tuple(fb.default_coefficients), 0, epsilon, theta)
        elif isinstance(fb, LaurentFiber):
            fm = FiberMap(m, tuple(fb.default_coefficients), fb.default_k, epsilon, theta)
        else:
            coeffs = (0,) * fb.default_k + (1,) if fb.default_k > 0 else (1,)
            shift = 0 if fb.default_k > 0 else -fb.default_k
            fm = FiberMap(m, coeffs, shift, epsilon, theta)
        return Instance(fm, f"m={m}, eps={epsilon}: {fm.describe()}")

    def instances(self) -> list[Instance]:
        return [self.member(epsilon=e) for e in self.epsilons]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "baseDegree": self.base_degree if self.base_degree is not None else "any m in N",
            "baseForm": self.base_form,
            "epsilons": list(self.epsilons),
            "fiber": self.fiber.to_dict(),
        }


Family = Union[Empty, Unsupported, MonomialFamily, LatticeMonomialFamily, FiberFamily]


def _trivial(c: CanonicalDomain) -> Classification:
    return Classification(c, identity_map(), ["already canonical"])


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision; ``exists`` is None when the pair is unsupported."""

    exists: bool | None
    theorem: str
    family: Family
    certificate: tuple[int, ...] | int | None = None
    source: Classification | None = None
    target: Classification | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.exists is None:
            assert isinstance(self.family, Unsupported)
        elif self.exists:
            assert not isinstance(self.family, (Empty, Unsupported))
        else:
            assert isinstance(self.family, Empty)

    @property
    def status(self) -> str:
        return {True: "exists", False: "empty", None: "unsupported"}[self.exists]

    def with_domains(self, source: Classification, target: Classification) -> Verdict:
        return Verdict(self.exists, self.theorem, self.family, self.certificate, source, target, self.notes)

    def to_dict(self) -> dict:
        out = {
            "verdict": self.status,
            "theorem": self.theorem,
            "citation": CITATIONS.get(self.theorem, ""),
            "certificate": list(self.certificate) if isinstance(self.certificate, tuple) else self.certificate,
            "family": self.family.to_dict(),
            "notes": list(self.notes),
        }
        return out


def _empty(theorem: str, reason: str) -> Verdict:
    return Verdict(False, theorem, Empty(theorem, reason))


def irrational_annulus(gamma1: QuadExt, log_r: QuadExt, gamma2: QuadExt, log_R: QuadExt) -> Verdict:
    """Maps ``D_{gamma1, r} -> D_{gamma2, R}`` between irrational annuli."""
    if log_r.sign() <= 0 or log_R.sign() <= 0:
        raise ValueError("log-radii must be positive")
    rho = mixed_div(log_R, log_r)
    rep1 = represent(rho, gamma2)
    rep2 = represent(mixed_mul(gamma1, rho), gamma2) if rep1 is not None else None
    if rep1 is None or rep2 is None:
        which = "log R/log r" if rep1 is None else "gamma1·log R/log r"
        return _empty("nq", f"{which} is not in Z + ({gamma2})Z")
    k1, l1, k2, l2 = rep1.k, rep1.l, rep2.k, rep2.l
    E = ((k1, k2), (l1, l2))
    rho_q = reduce_value(rho)
    level = gamma2 * l1 + k1
    fam = MonomialFamily((E, _neg(E)), Constraint(gamma2), (level, -level))
    notes = (f"rho = log R/log r = {rho_q}",)
    if not rep1.unique:
        notes += ("target exponent is rational, so the representation is not unique",)
    return Verdict(True, "nq", fam, (k1, k2, l1, l2), notes=notes)


def irrational_punctured(gamma1: QuadExt, gamma2: QuadExt) -> Verdict:
    """Maps ``D*_{gamma1} -> D*_{gamma2}``."""
    lattice = solve_ratio(gamma1, gamma2)
    if lattice.rank == 0:
        return _empty("el*", f"{gamma1} is not a ratio (k2 + beta l2)/(k1 + beta l1) for beta = {gamma2}")
    reps = lattice.positive_members(radius=1)
    # a nonzero lattice vector has k1 + l1*beta != 0, so negation always gives a positive one
    assert reps, "nonzero lattice without a positive member"
    best = reps[0]
    fam = LatticeMonomialFamily(lattice, Constraint(gamma2), tuple(reps[:4]))
    notes = ("the family is indexed by the full solution lattice; each listed representative "
             "is checked numerically by the verifier",)
    return Verdict(True, "el*", fam, best, notes=notes)


def irrational_elementary(gamma1: QuadExt, gamma2: QuadExt) -> Verdict:
    """Maps ``D_{gamma1} -> D_{gamma2}`` between irrational elementary domains."""
    s1, s2 = gamma1.sign(), gamma2.sign()
    if s1 == 0 or s2 == 0:
        raise ValueError("exponents must be nonzero")
    if s1 * s2 < 0:
        return _empty("el", "exponents of opposite sign")
    c = Constraint(gamma2)
    if s1 > 0:
        ratio = reduce_value(mixed_div(gamma1, gamma2))
        if not isinstance(ratio, QuadExt) or not ratio.is_rational():
            return _empty("el", f"{gamma1}/{gamma2} is not rational")
        p = ratio.as_fraction()
        k, l = p.denominator, p.numerator
        E = ((k, 0), (0, l))
        fam = MonomialFamily((E,), c, (QuadExt(k),), multiples=True)
        return Verdict(True, "el", fam, (k, 0, 0, l),
                       notes=(f"p = {p}; members (a z1^(tk), b z2^(tl)) for t >= 1",))
    if isinstance(gamma1, QuadExt) and gamma1.d and gamma2.d and gamma1.d != gamma2.d:
        return _empty("el", "gamma1 is not p1 + p2·gamma2 with rational p1, p2")
    # same field: compare coordinates over {1, √d}
    p2 = gamma1.x1 / gamma2.x1
    p1 = gamma1.x0 - p2 * gamma2.x0
    k1 = math.lcm(p1.denominator, p2.denominator)
    k2, l = int(p1 * k1), int(p2 * k1)
    E = ((k1, k2), (0, l))
    fam = MonomialFamily((E,), c, (QuadExt(k1),), multiples=True)
    return Verdict(True, "el", fam, (k1, k2, 0, l),
                   notes=(f"p1 = {p1}, p2 = {p2}; members (a z1^k1 z2^k2, b z2^l) with "
                          f"k2 = p1·k1, l = p2·k1, k1 a positive multiple of {k1}",))


_PRODUCT_TAGS = (Tag.ANNULUS_TIMES_C, Tag.ANNULUS_TIMES_CSTAR, Tag.PUNCTURED_DISC_TIMES_C,
                 Tag.PUNCTURED_DISC_TIMES_CSTAR, Tag.DISC_TIMES_C)


def _fiber_for(f1: str, f2: str) -> Fiber:
    if f1 == "C":
        return PolynomialFiber()
    if f2 == "C":
        return LaurentFiber()
    return MonomialFiber()


def rational_pair(src: CanonicalDomain, dst: CanonicalDomain) -> Verdict:
    """Maps between annulus / punctured-disc / disc products."""
    if src.tag not in _PRODUCT_TAGS or dst.tag not in _PRODUCT_TAGS:
        raise ValueError("rational_pair needs product-type canonical domains")
    if src.lower is not dst.lower:
        return _empty("i", f"lower bounds {src.lower.value} and {dst.lower.value} are incompatible")
    if src.lower is Lower.NEGATIVE:
        return Verdict(None, "prop", Unsupported("prop", "disc times C pairs fall under the rational "
                                                         "elementary classification"))
    f1, f2 = src.tag.fiber, dst.tag.fiber
    annulus = src.lower is Lower.POSITIVE
    if f1 == "C" and f2 == "C*":
        if annulus:
            return _empty("A1", "annulus times C never maps properly onto annulus times C*")
        return _empty("A2", "punctured disc times C never maps properly onto punctured disc times C*")
    fiber = _fiber_for(f1, f2)
    if annulus:
        ratio = reduce_value(mixed_div(dst.log_radius, src.log_radius))
        if not (isinstance(ratio, QuadExt) and ratio.is_integer()):
            return _empty("A", f"log R/log r = {ratio} is not a natural number")
        m = int(ratio.as_fraction())
        fam = FiberFamily(m, "e^{iθ} z^{±m}", (1, -1), fiber)
        return Verdict(True, "A", fam, m)
    fam = FiberFamily(None, "e^{iθ} z^{m}", (1,), fiber)
    return Verdict(True, "A2", fam, 1, notes=("base degree m is free; certificate is the minimal m",))


def _canonicalise(d: DomainSpec | CanonicalDomain) -> Classification:
    if isinstance(d, CanonicalDomain):
        return _trivial(d)
    if isinstance(d, DomainSpec):
        return classify(d)
    raise InvalidSpec(f"expected a DomainSpec or CanonicalDomain, got {type(d).__name__}")


def decide(src: DomainSpec | CanonicalDomain, dst: DomainSpec | CanonicalDomain) -> Verdict:
    """Decide whether proper holomorphic maps ``src -> dst`` exist and describe them."""
    cs, ct = _canonicalise(src), _canonicalise(dst)
    a, b = cs.canonical, ct.canonical
    if a.irrational != b.irrational:
        v = _empty("rozne", "one domain is of rational type and the other of irrational type")
    elif a.lower is not b.lower:
        v = _empty("i", f"lower bounds {a.lower.value} and {b.lower.value} are incompatible")
    elif a.irrational:
        if a.lower is Lower.POSITIVE:
            v = irrational_annulus(a.gamma, a.log_radius, b.gamma, b.log_radius)
        elif a.lower is Lower.ZERO:
            v = irrational_punctured(a.gamma, b.gamma)
        else:
            v = irrational_elementary(a.gamma, b.gamma)
    elif a.lower is Lower.NEGATIVE:
        v = Verdict(None, "prop", Unsupported("prop", "both domains are rational elementary "
                                                      "(including disc times C)"))
    else:
        v = rational_pair(a, b)
    return v.with_domains(cs, ct)
