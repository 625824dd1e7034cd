import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reinhardt_propmap.domains import (
    CanonicalDomain,
    DomainError,
    DomainSpec,
    InvalidSpec,
    Lower,
    MonomialMap,
    NotUnimodular,
    Tag,
    apply,
    classify,
    compose,
    identity_map,
    invert,
)
from reinhardt_propmap.field import QuadExt
from reinhardt_propmap.verify import SamplePlan, sample

from conftest import specs

R2 = QuadExt.sqrt(2)
PLAN = SamplePlan(count=200, seed=3)


def test_classify_irrational_annulus_is_identity():
    c = classify(DomainSpec.annulus((1, R2), -1, 1))
    assert c.canonical == CanonicalDomain(Tag.IRRATIONAL_ANNULUS, QuadExt(1), R2)
    assert c.witness.is_identity()


def test_classify_bezout_annulus():
    c = classify(DomainSpec.annulus((2, 3), -1, 1))
    assert c.canonical.tag is Tag.ANNULUS_TIMES_CSTAR
    # |z1^2 z2^3| in (1/e, e) is exactly the annulus of log-radius 1 in the new first coordinate
    assert c.canonical.log_radius == 1
    assert c.witness.E == ((2, 3), (1, 1))


def test_classify_axis_swap():
    c = classify(DomainSpec.punctured((0, 1), 0))
    assert c.canonical.tag is Tag.PUNCTURED_DISC_TIMES_C
    assert c.witness.E == ((0, 1), (1, 0))


def test_classify_elementary_irrational():
    c = classify(DomainSpec.elementary((1, R2), 0))
    assert c.canonical == CanonicalDomain(Tag.ELEMENTARY_IRRATIONAL, gamma=R2)
    assert c.witness.is_identity()


def test_classify_mixed_sign_elementary_swaps():
    c = classify(DomainSpec.elementary((-1, R2), 0))
    assert c.canonical.tag is Tag.ELEMENTARY_IRRATIONAL
    assert c.canonical.gamma == -R2 / 2
    assert c.witness.E == ((0, 1), (1, 0))


def test_both_negative_elementary_is_punctured():
    c = classify(DomainSpec.elementary((-1, -R2), 0))
    assert c.canonical == CanonicalDomain(Tag.IRRATIONAL_PUNCTURED, gamma=R2)
    assert c.witness.E == ((-1, 0), (0, -1))


def test_rational_elementary_marked():
    c = classify(DomainSpec.elementary((2, 1), 0))
    assert c.canonical.tag is Tag.ELEMENTARY_RATIONAL
    assert c.canonical.ratio == (1, 2)


@pytest.mark.parametrize("args", [
    dict(alpha=(0, 0), lower=Lower.ZERO, log_upper=0),
    dict(alpha=(1, R2), lower=Lower.POSITIVE, log_upper=0, log_lower=1),
    dict(alpha=(1, R2), lower=Lower.POSITIVE, log_upper=0),
    dict(alpha=(1, R2), lower=Lower.ZERO, log_upper=0, log_lower=-1),
    dict(alpha=(R2, QuadExt.sqrt(3)), lower=Lower.ZERO, log_upper=0),
])
def test_invalid_specs(args):
    with pytest.raises(InvalidSpec):
        DomainSpec(**args)


def test_apply_examples():
    np.testing.assert_allclose(apply(identity_map(), (1, 2)), (1, 2))
    f = MonomialMap(((2, 3), (1, 1)))
    np.testing.assert_allclose(apply(f, (math.e, 1)), (math.e ** 2, math.e))
    g = MonomialMap(((-1, 0), (0, -1)))
    np.testing.assert_allclose(apply(g, (2, 4)), (0.5, 0.25))
    with pytest.raises(DomainError):
        apply(g, (0, 1))


def test_invert_and_compose():
    f = MonomialMap(((2, 3), (1, 1)), (QuadExt(1), QuadExt(-2)), (0.5, 1.0))
    g = invert(f)
    assert g.E == ((-1, 3), (1, -2))
    assert compose(f, g).is_identity()
    assert compose(g, f).is_identity()
    with pytest.raises(NotUnimodular):
        invert(MonomialMap(((2, 0), (0, 1))))


def test_singular_map_rejected():
    with pytest.raises(ValueError):
        MonomialMap(((1, 2), (2, 4)))


@given(specs())
def test_witness_unimodular_and_roundtrip(spec):
    c = classify(spec)
    assert c.witness.det in (1, -1)
    z = sample(spec, PLAN)
    assert spec.contains(z).all()
    w = apply(c.witness, z)
    assert c.canonical.contains(w, tol=1e-9).all()
    back = apply(invert(c.witness), w)
    np.testing.assert_allclose(back, z, rtol=1e-12, atol=0)


@given(specs(), st.fractions(Fraction(1, 5), 5, max_denominator=6))
def test_scaling_invariance(spec, s):
    scaled = DomainSpec(tuple(a * s for a in spec.alpha), spec.lower, spec.log_upper * s,
                        None if spec.log_lower is None else spec.log_lower * s)
    assert classify(scaled).canonical == classify(spec).canonical


@given(specs())
def test_canonical_spec_classifies_to_itself(spec):
    c = classify(spec).canonical
    if c.tag.fiber == "C*":
        return  # C* fibres have no spec form
    again = classify(c.to_spec())
    assert again.canonical == c
    assert again.witness.is_identity()
