import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reinhardt_propmap.domains import CanonicalDomain, DomainSpec, MonomialMap, Tag
from reinhardt_propmap.field import QuadExt
from reinhardt_propmap.lattice import represent
from reinhardt_propmap.solver import FiberMap, decide
from reinhardt_propmap.verify import (
    NotApplicable,
    SamplePlan,
    check_containment,
    check_homogeneity,
    check_level_sets,
    discriminate_constraint,
    mutate_instance,
    oracle_membership,
    properness_proxy,
    radial_profile,
    sample,
    sample_logs,
    verify_instance,
    verify_verdict,
)

from conftest import specs

R2 = QuadExt.sqrt(2)
PLAN = SamplePlan()
SRC = CanonicalDomain(Tag.IRRATIONAL_ANNULUS, QuadExt(1), 1 + R2)
DST = CanonicalDomain(Tag.IRRATIONAL_ANNULUS, 3 + 2 * R2, R2)
E_PLUS = ((3, 7), (2, 5))
RHO = 3 + 2 * math.sqrt(2)


def annulus_map(log_b=0, log_a=None):
    la = -(R2 * log_b) if log_a is None else QuadExt.coerce(log_a)
    return MonomialMap(E_PLUS, (la, QuadExt.coerce(log_b)))


def test_sample_plan_validation():
    with pytest.raises(ValueError):
        SamplePlan(count=0)
    with pytest.raises(ValueError):
        SamplePlan(boundary_margin=0)
    with pytest.raises(ValueError):
        SamplePlan(tolerance=-1)


def test_sample_examples():
    plan = SamplePlan(count=1, seed=7)
    z = sample(CanonicalDomain(Tag.IRRATIONAL_ANNULUS, QuadExt(1), R2), plan)
    lev = math.log(abs(z[0, 0])) + math.sqrt(2) * math.log(abs(z[0, 1]))
    assert abs(lev) < 1 - plan.boundary_margin
    z = sample(CanonicalDomain(Tag.ELEMENTARY_IRRATIONAL, gamma=R2), PLAN)
    lev = np.log(np.abs(z[:, 0])) + math.sqrt(2) * np.log(np.abs(z[:, 1]))
    assert np.all(lev < -PLAN.boundary_margin)
    assert np.array_equal(sample(SRC, PLAN), sample(SRC, PLAN))


@given(specs(), st.integers(0, 2**32))
def test_samples_inside(spec, seed):
    z = sample(spec, SamplePlan(count=50, seed=seed))
    assert spec.contains(z).all()


def test_containment_examples():
    ident = MonomialMap(((1, 0), (0, 1)))
    assert check_containment(ident, SRC, SRC, PLAN) == 1.0
    assert check_containment(annulus_map(log_b=Fraction(1, 3)), SRC, DST, PLAN) == 1.0
    # log|a| = 10 shifts the image level by 10 against a half-width of about 5.83
    rate = check_containment(annulus_map(log_a=10), SRC, DST, PLAN)
    logs, _ = sample_logs(SRC, PLAN)
    expected = np.mean(RHO * (logs[:, 0] + (1 + math.sqrt(2)) * logs[:, 1]) + 10 < RHO)
    assert rate == pytest.approx(expected) and 0.0 < rate < 0.25
    assert check_containment(annulus_map(log_a=20), SRC, DST, PLAN) == 0.0


def test_level_set_examples():
    assert check_level_sets(annulus_map(), SRC, DST, PLAN) <= 1e-9
    ident = MonomialMap(((1, 0), (0, 1)))
    assert check_level_sets(ident, SRC, SRC, PLAN) <= 1e-12
    bad = MonomialMap(((4, 7), (2, 5)))
    assert check_level_sets(bad, SRC, DST, PLAN) > 1e-3


def test_homogeneity_examples():
    f = annulus_map(log_b=2)
    alpha, beta = 1 + math.sqrt(2), math.sqrt(2)
    assert check_homogeneity(f, RHO, alpha, beta, PLAN, points=[[0.0, 0.0]]) <= 1e-12
    lhs_at_e = f.log_abs(np.array([1.0, 0.0]))
    assert lhs_at_e[0] + beta * lhs_at_e[1] == pytest.approx(RHO, abs=1e-12)
    assert check_homogeneity(f, RHO, alpha, beta, PLAN) <= 1e-9
    neg = MonomialMap(((-3, -7), (-2, -5)))
    assert check_homogeneity(neg, RHO, alpha, beta, PLAN, branch=-1, points=[[1.0, 0.0]]) <= 1e-12
    assert check_homogeneity(neg, RHO, alpha, beta, PLAN, branch=1) > 1.0


def test_radial_profile_examples():
    ident = MonomialMap(((1, 0), (0, 1)))
    a = CanonicalDomain(Tag.IRRATIONAL_ANNULUS, QuadExt(1), R2)
    rp = radial_profile(ident, a, a)
    assert rp.slope == pytest.approx(1.0, abs=1e-12) and rp.endpoints_ok
    rp = radial_profile(annulus_map(), SRC, DST)
    assert rp.slope == pytest.approx(RHO, abs=1e-9) and rp.residual < 1e-9 and rp.endpoints_ok
    rp = radial_profile(MonomialMap(((-3, -7), (-2, -5))), SRC, DST)
    assert rp.slope == pytest.approx(-RHO, abs=1e-9) and rp.endpoints_ok
    assert rp.expected_limits[0] == pytest.approx(RHO)
    with pytest.raises(NotApplicable):
        radial_profile(ident, CanonicalDomain(Tag.IRRATIONAL_PUNCTURED, gamma=R2),
                       CanonicalDomain(Tag.IRRATIONAL_PUNCTURED, gamma=R2))


def test_properness_examples():
    ident = MonomialMap(((1, 0), (0, 1)))
    rep = properness_proxy(ident, SRC, SRC)
    upper = [s for s in rep.sequences if s.name == "level->upper"][0]
    assert upper.escaped and upper.final < 1e-5
    cs = CanonicalDomain(Tag.ANNULUS_TIMES_CSTAR, QuadExt(1))
    cs2 = CanonicalDomain(Tag.ANNULUS_TIMES_CSTAR, QuadExt(2))
    good = properness_proxy(FiberMap(2, (0, 1)), cs, cs2)
    assert good.consistent_with_proper
    stalled = properness_proxy(FiberMap(2, (1,)), cs, cs2)
    assert not stalled.consistent_with_proper
    names = {s.name for s in stalled.sequences if not s.escaped}
    assert names == {"fiber->inf", "fiber->0"}


def test_oracle_examples():
    assert oracle_membership(3 + 2 * R2, R2, 10) == [(3, 2)]
    assert oracle_membership(QuadExt(Fraction(1, 2)), R2, 50) == []
    hits = oracle_membership(QuadExt(Fraction(7, 3)), QuadExt(Fraction(1, 3)), 5)
    assert (2, 1) in hits and (1, 4) in hits
    assert hits == [(1, 4), (2, 1), (3, -2), (4, -5)]
    assert oracle_membership(1 + QuadExt.sqrt(3), R2, 10) == []
    with pytest.raises(ValueError):
        oracle_membership(QuadExt(1), R2, 0)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_oracle_agrees_with_represent(k, l):
    for beta in (R2, 1 + R2, QuadExt(Fraction(3, 7))):
        x = beta * l + k
        r = represent(x, beta)
        hits = oracle_membership(x, beta, 50)
        assert r is not None and (k, l) in hits
        if r.unique:
            assert hits == [(r.k, r.l)]


def test_discrimination_names_beta_form():
    src = CanonicalDomain(Tag.ELEMENTARY_IRRATIONAL, gamma=2 * R2)
    dst = CanonicalDomain(Tag.ELEMENTARY_IRRATIONAL, gamma=R2)
    rep = discriminate_constraint(((1, 0), (0, 2)), src, dst, PLAN, log_b=1)
    assert rep["holding"] == "beta"
    assert rep["betaForm"]["containmentPassRate"] == 1.0
    assert rep["alphaForm"]["levelShift"] == pytest.approx(-math.sqrt(2))
    # with log|b| = -1 the alpha-form pushes levels upward and leaves the target
    rep = discriminate_constraint(((1, 0), (0, 2)), src, dst, PLAN, log_b=-1)
    assert rep["alphaForm"]["containmentPassRate"] < 1.0


def test_verify_verdict_and_mutation():
    v = decide(SRC, DST)
    reps = verify_verdict(v, PLAN)
    assert len(reps) == 2 and all(r.passed for r in reps)
    assert reps[0].radial.slope > 0 > reps[1].radial.slope
    for slot in ("E11", "E12", "E21", "E22"):
        bad = mutate_instance(v.family.instances()[0], slot)
        assert not verify_instance(bad, SRC, DST, PLAN).passed


def test_spec_coordinate_containment():
    s = DomainSpec.annulus((2, 3), -1, 1)
    t = DomainSpec.annulus((4, 6), -4, 4)
    v = decide(s, t)
    reps = verify_verdict(v, PLAN, src_spec=s, dst_spec=t)
    assert all(r.passed and r.spec_containment_pass_rate == 1.0 for r in reps)


def test_reports_deterministic():
    v = decide(SRC, DST)
    a = [r.to_dict() for r in verify_verdict(v, PLAN)]
    b = [r.to_dict() for r in verify_verdict(v, PLAN)]
    assert a == b


def test_all_deviations_nonnegative():
    v = decide(SRC, DST)
    for r in verify_verdict(v, PLAN):
        assert r.level_set_max_deviation >= 0 and r.homogeneity_max_deviation >= 0
