"""Domain specifications, canonical forms and monomial witnesses.

A domain ``{z : r- < |z1|^a1 |z2|^a2 < r+}`` is stored by its exponent
pair and the logarithms of its bounds. :func:`classify` moves it by an
invertible monomial change of coordinates onto one of nine canonical
shapes and returns that change as a :class:`MonomialMap`.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .field import QuadExt, format_element
from .lattice import bezout

__all__ = [
    "Lower",
    "Tag",
    "DomainSpec",
    "CanonicalDomain",
    "MonomialMap",
    "Classification",
    "InvalidSpec",
    "DomainError",
    "NotUnimodular",
    "classify",
    "apply",
    "compose",
    "invert",
    "identity_map",
]

TWO_PI = 2 * math.pi


class InvalidSpec(ValueError):
    pass


class DomainError(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class Lower(enum.Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"


class Tag(enum.Enum):
    ANNULUS_TIMES_C = "AnnulusTimesC"
    ANNULUS_TIMES_CSTAR = "AnnulusTimesCstar"
    IRRATIONAL_ANNULUS = "IrrationalAnnulus"
    PUNCTURED_DISC_TIMES_C = "PuncturedDiscTimesC"
    PUNCTURED_DISC_TIMES_CSTAR = "PuncturedDiscTimesCstar"
    IRRATIONAL_PUNCTURED = "IrrationalPunctured"
    DISC_TIMES_C = "DiscTimesC"
    ELEMENTARY_IRRATIONAL = "ElementaryIrrational"
    ELEMENTARY_RATIONAL = "ElementaryRational"

    @property
    def lower(self) -> Lower:
        return _TAG_LOWER[self]

    @property
    def irrational(self) -> bool:
        return self in (Tag.IRRATIONAL_ANNULUS, Tag.IRRATIONAL_PUNCTURED, Tag.ELEMENTARY_IRRATIONAL)

    @property
    def fiber(self) -> str | None:
        """Second factor of a product domain: "C", "C*", or None."""
        return _TAG_FIBER.get(self)


_TAG_LOWER = {
    Tag.ANNULUS_TIMES_C: Lower.POSITIVE,
    Tag.ANNULUS_TIMES_CSTAR: Lower.POSITIVE,
    Tag.IRRATIONAL_ANNULUS: Lower.POSITIVE,
    Tag.PUNCTURED_DISC_TIMES_C: Lower.ZERO,
    Tag.PUNCTURED_DISC_TIMES_CSTAR: Lower.ZERO,
    Tag.IRRATIONAL_PUNCTURED: Lower.ZERO,
    Tag.DISC_TIMES_C: Lower.NEGATIVE,
    Tag.ELEMENTARY_IRRATIONAL: Lower.NEGATIVE,
    Tag.ELEMENTARY_RATIONAL: Lower.NEGATIVE,
}

_TAG_FIBER = {
    Tag.ANNULUS_TIMES_C: "C",
    Tag.ANNULUS_TIMES_CSTAR: "C*",
    Tag.PUNCTURED_DISC_TIMES_C: "C",
    Tag.PUNCTURED_DISC_TIMES_CSTAR: "C*",
    Tag.DISC_TIMES_C: "C",
}


def _q(x) -> QuadExt:
    return QuadExt.coerce(x if isinstance(x, QuadExt) else Fraction(x))


def _level_logs(alpha: tuple[float, float], logs: np.ndarray) -> np.ndarray:
    """``a1*log|z1| + a2*log|z2|`` with ``0*log 0 = 0`` and NaN for inf-inf."""
    out = np.zeros(logs.shape[:-1])
    with np.errstate(invalid="ignore"):
        for j in range(2):
            if alpha[j] != 0:
                out = out + alpha[j] * logs[..., j]
    return out


def _log_abs(z: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(z))


@dataclass(frozen=True)
class DomainSpec:
    """``{z : r- < |z^alpha| < r+}`` with bounds given as logarithms.

    ``lower`` says whether ``r-`` is negative, zero, or positive; in the
    last case ``log_lower`` holds ``log r-``.
    """

    alpha: tuple[QuadExt, QuadExt]
    lower: Lower
    log_upper: QuadExt
    log_lower: QuadExt | None = None

    def __post_init__(self):
        if len(self.alpha) != 2:
            raise InvalidSpec("alpha must be a pair")
        a1, a2 = (_q(a) for a in self.alpha)
        object.__setattr__(self, "alpha", (a1, a2))
        object.__setattr__(self, "log_upper", _q(self.log_upper))
        if not isinstance(self.lower, Lower):
            raise InvalidSpec(f"lower must be a Lower, got {self.lower!r}")
        if not a1 and not a2:
            raise InvalidSpec("alpha must not be (0, 0)")
        if a1.d and a2.d and a1.d != a2.d:
            raise InvalidSpec("both exponents must lie in the same field")
        if self.lower is Lower.POSITIVE:
            if self.log_lower is None:
                raise InvalidSpec("a positive lower bound needs log_lower")
            lo = _q(self.log_lower)
            object.__setattr__(self, "log_lower", lo)
            try:
                ok = lo < self.log_upper
            except ArithmeticError as exc:
                raise InvalidSpec(str(exc)) from exc
            if not ok:
                raise InvalidSpec(f"log_lower {lo} must be below log_upper {self.log_upper}")
        elif self.log_lower is not None:
            raise InvalidSpec("log_lower only applies to a positive lower bound")

    @classmethod
    def annulus(cls, alpha, log_lower, log_upper) -> DomainSpec:
        return cls(tuple(alpha), Lower.POSITIVE, log_upper, log_lower)

    @classmethod
    def punctured(cls, alpha, log_upper=0) -> DomainSpec:
        return cls(tuple(alpha), Lower.ZERO, log_upper)

    @classmethod
    def elementary(cls, alpha, log_upper=0) -> DomainSpec:
        return cls(tuple(alpha), Lower.NEGATIVE, log_upper)

    @property
    def radicand(self) -> int:
        return max(a.d for a in (*self.alpha, self.log_upper, self.log_lower or QuadExt(0)))

    def level(self, z: np.ndarray) -> np.ndarray:
        """``log|z^alpha|`` for points ``z`` of shape (..., 2)."""
        return _level_logs(tuple(map(float, self.alpha)), _log_abs(np.asarray(z)))

    def contains_logs(self, logs: np.ndarray, tol: float = 0.0) -> np.ndarray:
        lev = _level_logs(tuple(map(float, self.alpha)), logs)
        hi = float(self.log_upper)
        with np.errstate(invalid="ignore"):
            ok = lev < hi + tol
            if self.lower is Lower.POSITIVE:
                ok &= lev > float(self.log_lower) - tol
            elif self.lower is Lower.ZERO:
                ok &= lev > -np.inf
        return ok & ~np.isnan(lev)

    def contains(self, z: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return self.contains_logs(_log_abs(np.asarray(z)), tol)

    def to_dict(self) -> dict:
        out = {
            "alpha": [format_element(a) for a in self.alpha],
            "lower": self.lower.value,
            "logUpper": format_element(self.log_upper),
        }
        if self.log_lower is not None:
            out["logLower"] = format_element(self.log_lower)
        return out


@dataclass(frozen=True)
class CanonicalDomain:
    """One of the nine normal forms.

    ``log_radius`` is ``log rho`` for the annulus shapes, ``gamma`` the
    exponent of ``|z2|`` in ``|z1||z2|^gamma``, and ``ratio`` the reduced
    ``(p, q)`` of a rational elementary exponent.
    """

    tag: Tag
    log_radius: QuadExt | None = None
    gamma: QuadExt | None = None
    ratio: tuple[int, int] | None = None

    @property
    def lower(self) -> Lower:
        return self.tag.lower

    @property
    def irrational(self) -> bool:
        return self.tag.irrational

    @property
    def exponent(self) -> tuple[QuadExt, QuadExt]:
        if self.gamma is not None:
            return (QuadExt(1), self.gamma)
        if self.ratio is not None:
            return (QuadExt(1), QuadExt(Fraction(*self.ratio)))
        return (QuadExt(1), QuadExt(0))

    @property
    def level_bounds(self) -> tuple[float, float]:
        """Open interval for the level ``log|z1| + gamma*log|z2|``; -inf when unbounded."""
        if self.lower is Lower.POSITIVE:
            h = float(self.log_radius)
            return (-h, h)
        return (-math.inf, 0.0)

    @property
    def excluded_zero(self) -> tuple[bool, bool]:
        """Which coordinates can never vanish on the domain."""
        t = self.tag
        if t in (Tag.IRRATIONAL_ANNULUS, Tag.IRRATIONAL_PUNCTURED,
                 Tag.ANNULUS_TIMES_CSTAR, Tag.PUNCTURED_DISC_TIMES_CSTAR):
            return (True, True)
        if t in (Tag.ANNULUS_TIMES_C, Tag.PUNCTURED_DISC_TIMES_C):
            return (True, False)
        if t is Tag.DISC_TIMES_C:
            return (False, False)
        g = self.exponent[1]
        return (False, g.sign() < 0)

    def to_spec(self) -> DomainSpec:
        """The same set written as a spec; product fibres C* are not expressible
        and come out as C."""
        alpha = self.exponent
        if self.lower is Lower.POSITIVE:
            return DomainSpec.annulus(alpha, -self.log_radius, self.log_radius)
        if self.lower is Lower.ZERO:
            return DomainSpec.punctured(alpha, 0)
        return DomainSpec.elementary(alpha, 0)

    def level_logs(self, logs: np.ndarray) -> np.ndarray:
        return _level_logs(tuple(map(float, self.exponent)), logs)

    def contains_logs(self, logs: np.ndarray, tol: float = 0.0) -> np.ndarray:
        ok = self.to_spec().contains_logs(logs, tol)
        if self.tag.fiber == "C*":
            ok &= np.isfinite(logs[..., 1])
        return ok

    def contains(self, z: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return self.contains_logs(_log_abs(np.asarray(z)), tol)

    def describe(self) -> str:
        t = self.tag
        if t is Tag.IRRATIONAL_ANNULUS:
            return f"D_{{γ,r}}: γ={self.gamma}, log r={self.log_radius}"
        if t in (Tag.IRRATIONAL_PUNCTURED, Tag.ELEMENTARY_IRRATIONAL):
            return f"{t.value}: γ={self.gamma}"
        if t is Tag.ELEMENTARY_RATIONAL:
            return f"{t.value}: γ={self.ratio[0]}/{self.ratio[1]}"
        if self.log_radius is not None:
            return f"{t.value}: log ρ={self.log_radius}"
        return t.value

    def to_dict(self) -> dict:
        out: dict = {"tag": self.tag.value}
        if self.log_radius is not None:
            out["logRadius"] = format_element(self.log_radius)
        if self.gamma is not None:
            out["gamma"] = format_element(self.gamma)
        if self.ratio is not None:
            out["ratio"] = list(self.ratio)
        return out


def _det(e) -> int:
    return e[0][0] * e[1][1] - e[0][1] * e[1][0]


def _matmul(a, b) -> tuple[tuple[int, int], tuple[int, int]]:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


@dataclass(frozen=True)
class MonomialMap:
    """``z -> (c1 z1^E11 z2^E12, c2 z1^E21 z2^E22)``.

    ``log_moduli`` are the exact ``log|c_i|``; ``phases`` are ``arg c_i``.
    """

    E: tuple[tuple[int, int], tuple[int, int]]
    log_moduli: tuple[QuadExt, QuadExt] = (QuadExt(0), QuadExt(0))
    phases: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        e = tuple(tuple(int(x) for x in row) for row in self.E)
        if len(e) != 2 or any(len(r) != 2 for r in e):
            raise ValueError("E must be 2x2")
        object.__setattr__(self, "E", e)
        object.__setattr__(self, "log_moduli", tuple(_q(x) for x in self.log_moduli))
        object.__setattr__(self, "phases", tuple(float(p) % TWO_PI for p in self.phases))
        if _det(e) == 0:
            raise ValueError(f"exponent matrix {e} is singular")

    @property
    def det(self) -> int:
        return _det(self.E)

    def is_identity(self) -> bool:
        return (self.E == ((1, 0), (0, 1)) and not any(self.log_moduli)
                and all(math.isclose(p, 0.0, abs_tol=1e-15) or math.isclose(p, TWO_PI) for p in self.phases))

    def log_abs(self, logs: np.ndarray) -> np.ndarray:
        """``log|f(z)|`` evaluated from ``log|z|`` without forming powers."""
        logs = np.asarray(logs, dtype=float)
        out = np.empty(logs.shape)
        for i in range(2):
            acc = np.full(logs.shape[:-1], float(self.log_moduli[i]))
            with np.errstate(invalid="ignore"):
                for j in range(2):
                    if self.E[i][j]:
                        acc = acc + self.E[i][j] * logs[..., j]
            out[..., i] = acc
        return out

    def __call__(self, z):
        return apply(self, z)

    def to_dict(self) -> dict:
        return {
            "E": [list(r) for r in self.E],
            "logModuli": [format_element(x) for x in self.log_moduli],
            "phases": list(self.phases),
        }


def identity_map() -> MonomialMap:
    return MonomialMap(((1, 0), (0, 1)))


def apply(f: MonomialMap, z) -> np.ndarray:
    """Evaluate ``f`` at one point (pair) or an array of points of shape (n, 2)."""
    arr = np.asarray(z, dtype=complex)
    single = arr.ndim == 1
    pts = arr.reshape(-1, 2)
    out = np.empty_like(pts)
    for i in range(2):
        c = cmath.exp(complex(float(f.log_moduli[i]), f.phases[i]))
        acc = np.full(len(pts), c, dtype=complex)
        for j in range(2):
            k = f.E[i][j]
            if k == 0:
                continue
            base = pts[:, j]
            if k < 0 and np.any(base == 0):
                raise DomainError(f"coordinate z{j + 1} is zero but carries exponent {k}")
            acc = acc * base**k
        out[:, i] = acc
    return out[0] if single else out


def compose(f: MonomialMap, g: MonomialMap) -> MonomialMap:
    """``f ∘ g``."""
    E = _matmul(f.E, g.E)
    logm = tuple(f.log_moduli[i] + f.E[i][0] * g.log_moduli[0] + f.E[i][1] * g.log_moduli[1]
                 for i in range(2))
    ph = tuple(f.phases[i] + f.E[i][0] * g.phases[0] + f.E[i][1] * g.phases[1] for i in range(2))
    return MonomialMap(E, logm, ph)


def invert(f: MonomialMap) -> MonomialMap:
    d = f.det
    if d not in (1, -1):
        raise NotUnimodular(f"det {d} is not ±1")
    (a, b), (c, e) = f.E
    inv = ((e * d, -b * d), (-c * d, a * d))
    # g = inv with coefficients chosen so that f(g(z)) = z
    logm = tuple(-(inv[i][0] * f.log_moduli[0] + inv[i][1] * f.log_moduli[1]) for i in range(2))
    ph = tuple(-(inv[i][0] * f.phases[0] + inv[i][1] * f.phases[1]) for i in range(2))
    return MonomialMap(inv, logm, ph)


class Classification(NamedTuple):
    canonical: CanonicalDomain
    witness: MonomialMap
    trail: list[str]


SWAP = ((0, 1), (1, 0))
IDENT = ((1, 0), (0, 1))
NEG_I = ((-1, 0), (0, -1))
FLIP_FIRST = ((-1, 0), (0, 1))


def _witness(E, log1: QuadExt) -> MonomialMap:
    return MonomialMap(E, (log1, QuadExt(0)))


def classify(spec: DomainSpec) -> Classification:
    """Canonical form of ``spec`` with a unimodular monomial witness onto it."""
    if not isinstance(spec, DomainSpec):
        raise InvalidSpec(f"expected a DomainSpec, got {type(spec).__name__}")
    a1, a2 = spec.alpha
    hi = spec.log_upper
    lo = spec.log_lower
    trail: list[str] = []

    if not a1 or not a2:
        perm = IDENT if a2 == 0 else SWAP
        a = a1 if a2 == 0 else a2
        if perm is SWAP:
            trail.append("alpha1 = 0: swap coordinates so the active exponent comes first")
        trail.append(f"axis case: domain is a condition on |z1|^{a} only, z2 ranges over C")
        if spec.lower is Lower.POSITIVE:
            c = (lo + hi) / (2 * a)
            h = (hi - lo) / (2 * abs(a))
            trail.append(f"annulus in z1, recentre by log|c1| = {-c}")
            return Classification(CanonicalDomain(Tag.ANNULUS_TIMES_C, log_radius=h),
                                  _witness(perm, -c), trail)
        if a.sign() > 0:
            tag = Tag.PUNCTURED_DISC_TIMES_C if spec.lower is Lower.ZERO else Tag.DISC_TIMES_C
            trail.append(f"|z1| < exp({hi / a}); rescale by log|c1| = {-hi / a}")
            return Classification(CanonicalDomain(tag), _witness(perm, -hi / a), trail)
        # negative exponent: the disc condition becomes |z1| > radius, so z1 != 0
        if spec.lower is Lower.NEGATIVE:
            trail.append("negative exponent with no lower bound: domain misses z1 = 0 "
                         "and inverts onto a punctured disc")
        trail.append(f"invert z1; rescale by log|c1| = {hi / a}")
        E = _matmul(FLIP_FIRST, perm)
        return Classification(CanonicalDomain(Tag.PUNCTURED_DISC_TIMES_C), _witness(E, hi / a), trail)

    gamma = a2 / a1
    both_negative = a1.sign() < 0 and a2.sign() < 0
    punctured_like = spec.lower is Lower.ZERO or (spec.lower is Lower.NEGATIVE and both_negative)
    if spec.lower is Lower.NEGATIVE and both_negative:
        trail.append("both exponents negative with no lower bound: domain lies in (C*)^2 "
                     "and is the inverse image of a punctured domain")

    if not gamma.is_rational():
        trail.append(f"irrational type, gamma = alpha2/alpha1 = {gamma}")
        if spec.lower is Lower.POSITIVE:
            c = (lo + hi) / (2 * a1)
            h = (hi - lo) / (2 * abs(a1))
            trail.append(f"divide exponents by alpha1; recentre by log|c1| = {-c}")
            return Classification(CanonicalDomain(Tag.IRRATIONAL_ANNULUS, log_radius=h, gamma=gamma),
                                  _witness(IDENT, -c), trail)
        if punctured_like:
            if a1.sign() > 0:
                trail.append(f"divide exponents by alpha1; rescale by log|c1| = {-hi / a1}")
                return Classification(CanonicalDomain(Tag.IRRATIONAL_PUNCTURED, gamma=gamma),
                                      _witness(IDENT, -hi / a1), trail)
            trail.append(f"alpha1 < 0: invert both coordinates; rescale by log|c1| = {hi / a1}")
            return Classification(CanonicalDomain(Tag.IRRATIONAL_PUNCTURED, gamma=gamma),
                                  _witness(NEG_I, hi / a1), trail)
        if a1.sign() > 0:
            trail.append(f"rescale by log|c1| = {-hi / a1}")
            return Classification(CanonicalDomain(Tag.ELEMENTARY_IRRATIONAL, gamma=gamma),
                                  _witness(IDENT, -hi / a1), trail)
        g2 = a1 / a2
        trail.append(f"alpha1 < 0 < alpha2: swap coordinates, gamma = {g2}; rescale by "
                     f"log|c1| = {-hi / a2}")
        return Classification(CanonicalDomain(Tag.ELEMENTARY_IRRATIONAL, gamma=g2),
                              _witness(SWAP, -hi / a2), trail)

    g = gamma.as_fraction()
    p, q = g.numerator, g.denominator
    trail.append(f"rational type, gamma = {p}/{q}")
    if spec.lower is Lower.NEGATIVE and not both_negative:
        if a1.sign() > 0:
            trail.append(f"elementary rational domain; rescale by log|c1| = {-hi / a1}")
            return Classification(CanonicalDomain(Tag.ELEMENTARY_RATIONAL, ratio=(p, q)),
                                  _witness(IDENT, -hi / a1), trail)
        g2 = (a1 / a2).as_fraction()
        trail.append(f"elementary rational domain, alpha1 < 0 < alpha2: swap, gamma = {g2}; "
                     f"rescale by log|c1| = {-hi / a2}")
        return Classification(CanonicalDomain(Tag.ELEMENTARY_RATIONAL, ratio=(g2.numerator, g2.denominator)),
                              _witness(SWAP, -hi / a2), trail)

    m, n = bezout(p, q)
    psi = ((q, p), (m, n))
    s = QuadExt(q) / a1  # first new coordinate has log = s * level
    trail.append(f"apply psi = (z1^{q} z2^{p}, z1^{m} z2^{n}) with {p}·{m} - {q}·{n} = 1")
    if spec.lower is Lower.POSITIVE:
        ends = sorted((s * lo, s * hi))
        c = (ends[0] + ends[1]) / 2
        h = (ends[1] - ends[0]) / 2
        trail.append(f"annulus in the first coordinate; recentre by log|c1| = {-c}")
        return Classification(CanonicalDomain(Tag.ANNULUS_TIMES_CSTAR, log_radius=h),
                              _witness(psi, -c), trail)
    if s.sign() > 0:
        trail.append(f"punctured disc in the first coordinate; rescale by log|c1| = {-s * hi}")
        return Classification(CanonicalDomain(Tag.PUNCTURED_DISC_TIMES_CSTAR),
                              _witness(psi, -s * hi), trail)
    trail.append(f"q/alpha1 < 0: invert the first coordinate; rescale by log|c1| = {s * hi}")
    return Classification(CanonicalDomain(Tag.PUNCTURED_DISC_TIMES_CSTAR),
                          _witness(_matmul(FLIP_FIRST, psi), s * hi), trail)
