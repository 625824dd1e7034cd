"""Numerical checks of emitted maps, plus brute-force oracles for the exact solvers.

Every check works on ``log|z|`` coordinates. Monomial maps are evaluated
directly in log space (``MonomialMap.log_abs``), so points far out on a
level set never overflow; fibre maps are evaluated on complex points.
All randomness comes from ``numpy.random.default_rng(plan.seed)`` and
reductions are max/min/mean only, so identical plans give identical
reports.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Union

import numpy as np

from .domains import (
    CanonicalDomain,
    DomainSpec,
    Lower,
    MonomialMap,
    Tag,
    classify,
    compose,
    invert,
)
from .field import QuadExt
from .solver import FiberMap, Instance, Verdict

__all__ = [
    "SamplePlan",
    "NotApplicable",
    "sample",
    "sample_logs",
    "check_containment",
    "check_level_sets",
    "check_homogeneity",
    "radial_profile",
    "RadialProfile",
    "properness_proxy",
    "EscapeReport",
    "SequenceReport",
    "oracle_membership",
    "discriminate_constraint",
    "VerificationReport",
    "verify_instance",
    "verify_verdict",
    "mutate_instance",
    "in_spec_coordinates",
]

Domain = Union[DomainSpec, CanonicalDomain]
AnyMap = Union[MonomialMap, FiberMap, Callable]

# width of the sampled level window when the domain has no lower bound
UNBOUNDED_WIDTH = 6.0
FIBER_RANGE = 3.0
PROBE_PHASES = (0.3, 1.1)


class NotApplicable(Exception):
    pass


@dataclass(frozen=True)
class SamplePlan:
    count: int = 1000
    seed: int = 0
    boundary_margin: float = 1e-3
    tolerance: float = 1e-9

    def __post_init__(self):
        if int(self.count) < 1:
            raise ValueError("count must be at least 1")
        if not self.boundary_margin > 0:
            raise ValueError("boundary_margin must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not -(2**63) <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(int(self.seed))

    def to_dict(self) -> dict:
        return {"count": self.count, "seed": self.seed, "boundaryMargin": self.boundary_margin,
                "tolerance": self.tolerance}


@dataclass(frozen=True)
class _View:
    """Float view of a domain: level ``a1 u1 + a2 u2`` in ``(lo, hi)``."""

    exponent: tuple[float, float]
    lo: float
    hi: float
    lower: Lower
    fiber: str | None
    excluded: tuple[bool, bool]

    def level(self, logs: np.ndarray) -> np.ndarray:
        out = np.zeros(logs.shape[:-1])
        with np.errstate(invalid="ignore"):
            for j in range(2):
                if self.exponent[j]:
                    out = out + self.exponent[j] * logs[..., j]
        return out


def _view(d: Domain) -> _View:
    if isinstance(d, CanonicalDomain):
        lo, hi = d.level_bounds
        return _View(tuple(map(float, d.exponent)), lo, hi, d.lower, d.tag.fiber, d.excluded_zero)
    if isinstance(d, DomainSpec):
        a = tuple(map(float, d.alpha))
        lo = float(d.log_lower) if d.lower is Lower.POSITIVE else -math.inf
        fiber = "C" if 0.0 in a else None
        excl = tuple(x < 0 or (x > 0 and d.lower is not Lower.NEGATIVE) for x in a)
        return _View(a, lo, float(d.log_upper), d.lower, fiber, excl)
    raise TypeError(f"expected a domain, got {type(d).__name__}")


def _split_levels(v: _View, levels: np.ndarray, other: np.ndarray) -> np.ndarray:
    """Log-moduli with the given levels; ``other`` fills the free direction."""
    a1, a2 = v.exponent
    logs = np.empty(levels.shape + (2,))
    if a2 == 0:
        logs[..., 0] = levels / a1
        logs[..., 1] = other
    elif a1 == 0:
        logs[..., 1] = levels / a2
        logs[..., 0] = other
    else:
        logs[..., 1] = other
        logs[..., 0] = (levels - a2 * other) / a1
    return logs


def _level_window(v: _View, margin: float) -> tuple[float, float]:
    top = v.hi - margin
    bottom = v.lo + margin if math.isfinite(v.lo) else top - UNBOUNDED_WIDTH
    if not bottom < top:
        raise ValueError("domain is thinner than twice the boundary margin")
    return bottom, top


def sample_logs(domain: Domain, plan: SamplePlan, levels: np.ndarray | None = None,
                rng: np.random.Generator | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``(log|z|, arg z)`` arrays of shape (n, 2) for points strictly inside ``domain``."""
    v = _view(domain)
    rng = plan.rng() if rng is None else rng
    if levels is None:
        bottom, top = _level_window(v, plan.boundary_margin)
        levels = rng.uniform(bottom, top, plan.count)
    other = rng.uniform(-FIBER_RANGE, FIBER_RANGE, levels.shape)
    phases = rng.uniform(0.0, 2 * math.pi, levels.shape + (2,))
    return _split_levels(v, levels, other), phases


def sample(domain: Domain, plan: SamplePlan) -> np.ndarray:
    """Complex points of shape (count, 2); deterministic in ``plan.seed``."""
    logs, phases = sample_logs(domain, plan)
    return np.exp(logs + 1j * phases)


def _image_logs(f: AnyMap, logs: np.ndarray, phases: np.ndarray) -> np.ndarray:
    if isinstance(f, MonomialMap):
        return f.log_abs(logs)
    z = np.exp(logs + 1j * phases)
    w = np.asarray(f(z.reshape(-1, 2))).reshape(z.shape)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(w))


def _contains(d: Domain, logs: np.ndarray) -> np.ndarray:
    return d.contains_logs(logs)


def check_containment(f: AnyMap, src: Domain, dst: Domain, plan: SamplePlan) -> float:
    """Fraction of sampled source points whose image lies in ``dst``."""
    logs, phases = sample_logs(src, plan)
    img = _image_logs(f, logs, phases)
    return float(np.mean(_contains(dst, img)))


def check_level_sets(f: AnyMap, src: Domain, dst: Domain, plan: SamplePlan, batch: int = 10) -> float:
    """Largest spread of target levels over a batch of points sharing one source level."""
    v = _view(src)
    rng = plan.rng()
    nb = max(1, plan.count // batch)
    bottom, top = _level_window(v, plan.boundary_margin)
    levels = np.repeat(rng.uniform(bottom, top, nb), batch)
    logs, phases = sample_logs(src, plan, levels=levels, rng=rng)
    lev = _view(dst).level(_image_logs(f, logs, phases)).reshape(nb, batch)
    if not np.all(np.isfinite(lev)):
        return math.inf
    return float(np.max(lev.max(axis=1) - lev.min(axis=1)))


def check_homogeneity(f: AnyMap, rho: float, alpha: float, beta: float, plan: SamplePlan,
                      branch: int = 1, points: np.ndarray | None = None) -> float:
    """``max |log|f1| + beta log|f2| - branch*rho*(log|z1| + alpha log|z2|)|``.

    ``points`` are log-moduli of shape (n, 2); by default they are drawn
    uniformly from the box ``[-3, 3]^2``.
    """
    rng = plan.rng()
    if points is None:
        logs = rng.uniform(-FIBER_RANGE, FIBER_RANGE, (plan.count, 2))
    else:
        logs = np.asarray(points, dtype=float).reshape(-1, 2)
    phases = rng.uniform(0.0, 2 * math.pi, logs.shape)
    img = _image_logs(f, logs, phases)
    lhs = img[:, 0] + beta * img[:, 1]
    rhs = branch * rho * (logs[:, 0] + alpha * logs[:, 1])
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class RadialProfile:
    slope: float
    intercept: float
    residual: float
    endpoint_limits: tuple[float, float]
    expected_limits: tuple[float, float]
    endpoints_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _symmetric_annulus(d: Domain) -> tuple[float, float]:
    if isinstance(d, DomainSpec):
        c = classify(d)
        if c.canonical.tag is not Tag.IRRATIONAL_ANNULUS or not c.witness.is_identity():
            raise NotApplicable("radial profile needs symmetric irrational annuli")
        d = c.canonical
    if not isinstance(d, CanonicalDomain) or d.tag is not Tag.IRRATIONAL_ANNULUS:
        raise NotApplicable("radial profile is defined for irrational annuli only")
    return float(d.gamma), float(d.log_radius)


def radial_profile(f: MonomialMap, src: Domain, dst: Domain, grid_size: int = 64,
                   approach_steps: int = 20) -> RadialProfile:
    """Fit ``log v(lambda)`` against ``log|lambda|`` where ``v = |f1(lambda,1)||f2(lambda,1)|^beta``.

    The endpoint limits are read off at ``log|lambda| = ±h(1 - 2^-j)``
    for the last ``j``; they should tend to ``∓log R`` or ``±log R``
    according to the sign of the slope.
    """
    if not isinstance(f, MonomialMap):
        raise NotApplicable("radial profile needs a monomial map")
    _, h = _symmetric_annulus(src)
    beta, H = _symmetric_annulus(dst)

    def logv(x):
        x = np.asarray(x, dtype=float)
        img = f.log_abs(np.stack([x, np.zeros_like(x)], axis=-1))
        return img[..., 0] + beta * img[..., 1]

    x = np.linspace(-h, h, grid_size + 2)[1:-1]
    y = logv(x)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    j = np.arange(1, approach_steps + 1)
    near = h * (1 - 0.5 ** j)
    lo_seq, hi_seq = logv(-near), logv(near)
    sgn = 1.0 if slope >= 0 else -1.0
    expected = (-sgn * H, sgn * H)
    d_lo, d_hi = np.abs(lo_seq - expected[0]), np.abs(hi_seq - expected[1])
    scale = max(1.0, H)
    ok = bool(d_lo[-1] < 1e-3 * scale and d_hi[-1] < 1e-3 * scale
              and np.all(np.diff(d_lo) <= 1e-12 * scale) and np.all(np.diff(d_hi) <= 1e-12 * scale))
    return RadialProfile(float(slope), float(intercept), residual,
                         (float(lo_seq[-1]), float(hi_seq[-1])), expected, ok)


@dataclass(frozen=True)
class SequenceReport:
    name: str
    indicators: tuple[float, ...]
    escaped: bool

    @property
    def final(self) -> float:
        return self.indicators[-1]

    def to_dict(self) -> dict:
        return {"name": self.name, "final": self.final, "escaped": self.escaped}


@dataclass(frozen=True)
class EscapeReport:
    """Finite boundary sequences can only falsify properness, hence the label."""

    sequences: tuple[SequenceReport, ...]

    @property
    def consistent_with_proper(self) -> bool:
        return all(s.escaped for s in self.sequences)

    @property
    def final_boundary_distance(self) -> float:
        return max(s.final for s in self.sequences)

    def to_dict(self) -> dict:
        return {
            "label": "consistent with proper" if self.consistent_with_proper else "not proper",
            "consistentWithProper": self.consistent_with_proper,
            "finalBoundaryDistance": self.final_boundary_distance,
            "sequences": [s.to_dict() for s in self.sequences],
        }


def _boundary_sequences(v: _View, n: int) -> list[tuple[str, np.ndarray]]:
    a = v.exponent
    j0 = 0 if a[0] else 1
    j1 = 1 - j0
    k = np.arange(1, n + 1, dtype=float)
    halving = 0.5 ** k
    finite_lo = math.isfinite(v.lo)
    width = (v.hi - v.lo) / 2 if finite_lo else 1.0
    centre = (v.hi + v.lo) / 2 if finite_lo else v.hi - 1.0

    def along(levels, other):
        logs = np.empty((len(levels), 2))
        logs[:, j1] = other
        logs[:, j0] = (levels - a[j1] * other) / a[j0]
        return logs

    zero = np.zeros(n)
    seqs = [("level->upper", along(v.hi - width * halving, zero))]
    if finite_lo:
        seqs.append(("level->lower", along(v.lo + width * halving, zero)))
    elif v.lower is Lower.ZERO:
        # |z_j0| halves each step
        seqs.append(("level->-inf", along(centre - abs(a[j0]) * k * math.log(2), zero)))
    if a[j1] == 0:
        step = k * math.log(2)
        seqs.append(("fiber->inf", along(np.full(n, centre), step)))
        if v.excluded[j1]:
            seqs.append(("fiber->0", along(np.full(n, centre), -step)))
    else:
        grow = 2.0 ** k
        seqs.append(("levelset->+", along(np.full(n, centre), grow)))
        seqs.append(("levelset->-", along(np.full(n, centre), -grow)))
    return seqs


def _escape_indicator(v: _View, img: np.ndarray) -> np.ndarray:
    lev = v.level(img)
    with np.errstate(invalid="ignore", over="ignore"):
        dist = v.hi - lev
        if math.isfinite(v.lo):
            dist = np.minimum(dist, lev - v.lo)
        elif v.lower is Lower.ZERO:
            dist = np.minimum(dist, np.exp(lev))
        dist = np.where(np.isnan(dist), 0.0, np.maximum(dist, 0.0))
        lognorm = 0.5 * np.logaddexp(2 * img[:, 0], 2 * img[:, 1])
        terms = [dist, np.exp(-np.logaddexp(0.0, lognorm))]
        for j in range(2):
            if v.excluded[j]:
                terms.append(np.exp(img[:, j]))
    return np.minimum.reduce(terms)


def properness_proxy(f: AnyMap, src: Domain, dst: Domain, sequence_length: int = 20,
                     threshold: float = 1e-3) -> EscapeReport:
    """Push points toward each boundary stratum of ``src`` and watch the image.

    The indicator is the smallest of: distance of the image level to the
    target bounds, ``1/(1 + |f|)``, and ``|f_j|`` for each coordinate the
    target cannot contain zero in. A sequence escapes when the indicator
    ends below ``threshold`` and is non-increasing over its second half.
    """
    vs, vd = _view(src), _view(dst)
    phases_row = np.array(PROBE_PHASES)
    reports = []
    for name, logs in _boundary_sequences(vs, sequence_length):
        phases = np.broadcast_to(phases_row, logs.shape)
        ind = _escape_indicator(vd, _image_logs(f, logs, phases))
        tail = ind[len(ind) // 2:]
        monotone = bool(np.all(np.diff(tail) <= 1e-12 * np.maximum(tail[:-1], 1e-300)))
        escaped = bool(ind[-1] < threshold and monotone)
        reports.append(SequenceReport(name, tuple(float(x) for x in ind), escaped))
    return EscapeReport(tuple(reports))


def oracle_membership(x, beta, bound: int) -> list[tuple[int, int]]:
    """All ``(k, l)`` with ``|k|, |l| <= bound`` and ``x = k + l*beta``, by exhaustive scan."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    x, beta = QuadExt.coerce(x), QuadExt.coerce(beta)
    if x.d and beta.d and x.d != beta.d:
        # x - l*beta keeps the irrational part of x for every l
        return []
    x0, x1, b0, b1 = x.x0, x.x1, beta.x0, beta.x1
    hits = []
    for l in range(-bound, bound + 1):
        if x1 != l * b1:
            continue
        r = x0 - l * b0
        if r.denominator == 1 and abs(r) <= bound:
            hits.append((int(r), l))
    return sorted(hits)


def discriminate_constraint(E, src: CanonicalDomain, dst: CanonicalDomain, plan: SamplePlan,
                            log_b=1) -> dict:
    """Instantiate ``E`` under both candidate coefficient relations and test each.

    beta-form: ``log|a| + beta log|b| = 0``; alpha-form: ``log|a| + alpha log|b| = 0``
    with ``alpha`` the source exponent. A form holds when its instance
    passes containment and the properness proxy.
    """
    alpha, beta = src.exponent[1], dst.exponent[1]
    log_b = QuadExt.coerce(log_b)
    out = {}
    for name, coef in (("betaForm", beta), ("alphaForm", alpha)):
        log_a = -(coef * log_b)
        f = MonomialMap(E, (log_a, log_b))
        rate = check_containment(f, src, dst, plan)
        esc = properness_proxy(f, src, dst)
        shift = float(log_a) + float(beta) * float(log_b)
        out[name] = {
            "logA": float(log_a),
            "logB": float(log_b),
            "containmentPassRate": rate,
            "levelShift": shift,
            "consistentWithProper": esc.consistent_with_proper,
            "holds": rate == 1.0 and esc.consistent_with_proper,
        }
    b, a = out["betaForm"]["holds"], out["alphaForm"]["holds"]
    out["holding"] = "both" if a and b else "beta" if b else "alpha" if a else "neither"
    return out


@dataclass
class VerificationReport:
    instance: str
    containment_pass_rate: float
    level_set_max_deviation: float
    homogeneity_max_deviation: float | None = None
    radial: RadialProfile | None = None
    properness: EscapeReport | None = None
    constraint_discrimination: dict | None = None
    spec_containment_pass_rate: float | None = None
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "passed": self.passed,
            "failures": list(self.failures),
            "containmentPassRate": self.containment_pass_rate,
            "levelSetMaxDeviation": self.level_set_max_deviation,
            "homogeneityMaxDeviation": self.homogeneity_max_deviation,
            "radialProfile": self.radial.to_dict() if self.radial else None,
            "propernessProxy": self.properness.to_dict() if self.properness else None,
            "constraintDiscrimination": self.constraint_discrimination,
            "specContainmentPassRate": self.spec_containment_pass_rate,
            "notes": list(self.notes),
        }


class _Chain:
    """``maps[-1] ∘ ... ∘ maps[0]`` for maps that are not all monomial."""

    def __init__(self, maps):
        self.maps = list(maps)

    def __call__(self, z):
        for m in self.maps:
            z = m(z)
        return z


def in_spec_coordinates(f: AnyMap, src_witness: MonomialMap, dst_witness: MonomialMap) -> AnyMap:
    """``W_dst^{-1} ∘ f ∘ W_src``: the same map between the original specs."""
    back = invert(dst_witness)
    if isinstance(f, MonomialMap):
        return compose(back, compose(f, src_witness))
    return _Chain([src_witness, f, back])


def verify_instance(inst: Instance, src: CanonicalDomain, dst: CanonicalDomain, plan: SamplePlan,
                    src_spec: DomainSpec | None = None, dst_spec: DomainSpec | None = None,
                    src_witness: MonomialMap | None = None, dst_witness: MonomialMap | None = None,
                    discriminate: bool = False) -> VerificationReport:
    """Run every applicable check on one instantiated member."""
    f = inst.map
    tol = plan.tolerance
    rep = VerificationReport(inst.label, check_containment(f, src, dst, plan),
                             check_level_sets(f, src, dst, plan))
    if rep.containment_pass_rate < 1.0:
        rep.failures.append("containment")
    if not rep.level_set_max_deviation <= tol:
        rep.failures.append("level_sets")

    monomial = isinstance(f, MonomialMap)
    if monomial and inst.level_exponent is not None:
        e = float(inst.level_exponent)
        rep.homogeneity_max_deviation = check_homogeneity(
            f, abs(e), float(src.exponent[1]), float(dst.exponent[1]), plan,
            branch=1 if e > 0 else -1)
        if not rep.homogeneity_max_deviation <= tol:
            rep.failures.append("homogeneity")
    else:
        rep.notes.append("homogeneity: not applicable to fibre maps")

    if monomial and src.tag is Tag.IRRATIONAL_ANNULUS and dst.tag is Tag.IRRATIONAL_ANNULUS:
        rep.radial = radial_profile(f, src, dst)
        e = float(inst.level_exponent) if inst.level_exponent is not None else rep.radial.slope
        scale = max(1.0, abs(e) * float(src.log_radius))
        if abs(rep.radial.slope - e) > tol * scale or rep.radial.residual > tol * scale:
            rep.failures.append("radial_profile")
        elif not rep.radial.endpoints_ok:
            rep.failures.append("radial_profile")
    else:
        rep.notes.append("radial profile: not applicable")

    rep.properness = properness_proxy(f, src, dst)
    if not rep.properness.consistent_with_proper:
        rep.failures.append("properness_proxy")

    if discriminate and monomial:
        rep.constraint_discrimination = discriminate_constraint(f.E, src, dst, plan)

    if src_spec is not None and dst_spec is not None and src_witness is not None and dst_witness is not None:
        if not (src_witness.is_identity() and dst_witness.is_identity()):
            g = in_spec_coordinates(f, src_witness, dst_witness)
            rep.spec_containment_pass_rate = check_containment(g, src_spec, dst_spec, plan)
            if rep.spec_containment_pass_rate < 1.0:
                rep.failures.append("spec_containment")
    return rep


_MUTATION_SLOTS = {"E11": (0, 0), "E12": (0, 1), "E21": (1, 0), "E22": (1, 1)}


def mutate_instance(inst: Instance, spec: str) -> Instance:
    """Apply a test-hook corruption such as ``"E11"`` (adds 1) or ``"E21-2"``."""
    if not isinstance(inst.map, MonomialMap):
        raise ValueError("mutations apply to monomial instances only")
    s = spec.strip()
    slot, delta = s[:3], s[3:]
    if slot not in _MUTATION_SLOTS:
        raise ValueError(f"unknown mutation slot {slot!r}; expected one of {sorted(_MUTATION_SLOTS)}")
    try:
        d = int(delta) if delta else 1
    except ValueError:
        raise ValueError(f"bad mutation amount {delta!r}") from None
    i, j = _MUTATION_SLOTS[slot]
    E = [list(r) for r in inst.map.E]
    E[i][j] += d
    f = MonomialMap(tuple(map(tuple, E)), inst.map.log_moduli, inst.map.phases)
    return Instance(f, f"{inst.label} mutated {slot}{d:+d}", inst.level_exponent)


def with_coefficients(inst: Instance, log_moduli, phases=(0.0, 0.0)) -> Instance:
    if not isinstance(inst.map, MonomialMap):
        raise ValueError("coefficients apply to monomial instances only")
    f = MonomialMap(inst.map.E, tuple(log_moduli), tuple(phases))
    return Instance(f, f"{inst.label} with log|c| = ({log_moduli[0]}, {log_moduli[1]})",
                    inst.level_exponent)


def verify_verdict(verdict: Verdict, plan: SamplePlan, coefficients=None, mutation: str | None = None,
                   src_spec: DomainSpec | None = None, dst_spec: DomainSpec | None = None,
                   member: int | None = None) -> list[VerificationReport]:
    """Verify the default members of a positive verdict (or just one of them)."""
    if verdict.exists is not True:
        raise ValueError(f"nothing to verify: verdict is {verdict.status}")
    src, dst = verdict.source.canonical, verdict.target.canonical
    insts = verdict.family.instances()
    if member is not None:
        if not 0 <= member < len(insts):
            raise ValueError(f"member index {member} out of range 0..{len(insts) - 1}")
        insts = [insts[member]]
    if coefficients is not None:
        insts = [with_coefficients(i, *coefficients) for i in insts]
    if mutation:
        insts = [mutate_instance(i, mutation) for i in insts]
    discriminate = verdict.theorem == "el"
    return [verify_instance(i, src, dst, plan, src_spec, dst_spec,
                            verdict.source.witness, verdict.target.witness, discriminate)
            for i in insts]
