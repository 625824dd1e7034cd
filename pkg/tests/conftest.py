from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from reinhardt_propmap.field import QuadExt

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

RADICANDS = (2, 3, 5, 6, 7, 10, 11)

small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def quad(draw, d=None, nonzero=False):
    d = draw(st.sampled_from(RADICANDS)) if d is None else d
    x0 = draw(small_fracs)
    x1 = draw(small_fracs)
    a = QuadExt(x0, x1, d if x1 else 0)
    if nonzero and not a:
        a = QuadExt(1)
    return a


@st.composite
def irrational(draw, d=None):
    d = draw(st.sampled_from(RADICANDS)) if d is None else d
    x0 = draw(small_fracs)
    x1 = draw(small_fracs.filter(bool))
    return QuadExt(x0, x1, d)


# criterion number -> (passed, detail); filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def _spec_from(alpha, lower, lo, hi):
    from reinhardt_propmap.domains import DomainSpec, Lower
    lower = Lower(lower)
    if lower is Lower.POSITIVE:
        return DomainSpec(alpha, lower, hi, lo)
    return DomainSpec(alpha, lower, hi)


@st.composite
def specs(draw, kind=None, lower=None, d=None):
    """Random valid DomainSpec; ``kind`` is "rational", "irrational", "axis" or None."""
    kind = draw(st.sampled_from(["rational", "irrational", "axis"])) if kind is None else kind
    d = draw(st.sampled_from((2, 3, 5))) if d is None else d
    nz = st.integers(-4, 4).filter(bool)
    if kind == "axis":
        a = QuadExt(draw(nz), 0)
        alpha = (a, QuadExt(0)) if draw(st.booleans()) else (QuadExt(0), a)
    elif kind == "rational":
        alpha = (QuadExt(draw(nz)), QuadExt(draw(nz)))
    else:
        a1 = QuadExt(draw(nz))
        a2 = QuadExt(draw(st.integers(-3, 3)), draw(nz), d)
        alpha = (a1, a2) if draw(st.booleans()) else (a2, a1)
    lower = draw(st.sampled_from(["negative", "zero", "positive"])) if lower is None else lower
    hi = QuadExt(draw(st.fractions(-3, 3, max_denominator=4)))
    lo = hi - QuadExt(draw(st.fractions(Fraction(1, 2), 4, max_denominator=4)))
    return _spec_from(alpha, lower, lo, hi)
