import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelcap.numerics import TailModel
from modelcap.profiles import (
    INF,
    Alternating,
    BreakpointError,
    Constant,
    DomainError,
    Exponential,
    Linear,
    Poly,
    Power,
    ProfileParseError,
    RadialProfile,
    Segment,
    Sinh,
    Tabulated,
    WarpingProfile,
    cusp_profile,
    euclidean_profile,
    hyperbolic_profile,
    parse_spec,
)


@pytest.mark.parametrize(
    "profile, t, expected",
    [
        (euclidean_profile(), 2.0, 2.0),
        (cusp_profile(), 2.0, math.exp(-2.0)),
        (cusp_profile(), 1.0, math.exp(-1.0)),
        (WarpingProfile([Segment(Linear(3.0), 0.0, INF)]), 5.0, 15.0),
        (hyperbolic_profile(), 1.0, math.sinh(1.0)),
    ],
)
def test_eval(profile, t, expected):
    assert profile(t) == pytest.approx(expected, rel=1e-15)


def test_eval_vectorised_matches_scalar():
    h = cusp_profile()
    ts = np.linspace(0.1, 5.0, 50)
    assert np.array_equal(h(ts), np.array([h(float(t)) for t in ts]))


@pytest.mark.parametrize("t", [0.0, -1.0])
def test_eval_domain(t):
    with pytest.raises(DomainError):
        euclidean_profile()(t)


def test_right_continuous_at_breakpoints():
    prof = RadialProfile([Segment(Constant(1.0), 0.0, 2.0), Segment(Constant(5.0), 2.0, INF)])
    assert prof(2.0) == 5.0
    assert prof(np.nextafter(2.0, 0)) == 1.0


@pytest.mark.parametrize(
    "profile, t, expected",
    [
        (euclidean_profile(), 7.0, 1.0),
        (WarpingProfile([Segment(Exponential(1.0, -1.0), 0.0, INF)]), 1.0, -math.exp(-1.0)),
        (WarpingProfile([Segment(Constant(2.5), 0.0, INF)]), 3.3, 0.0),
    ],
)
def test_derivative(profile, t, expected):
    assert profile.derivative(t) == pytest.approx(expected, rel=1e-15, abs=0)


def test_derivative_at_breakpoint_reports_both_sides():
    with pytest.raises(BreakpointError) as info:
        cusp_profile().derivative(1.0)
    assert info.value.left == pytest.approx(math.exp(-1.0))
    assert info.value.right == pytest.approx(-math.exp(-1.0))


@pytest.mark.parametrize(
    "profile, kind, rate",
    [(euclidean_profile(), "power", -1.0), (cusp_profile(), "exponential", -1.0)],
)
def test_tail_class(profile, kind, rate):
    tail = profile.tail_class()
    assert (tail.kind, tail.rate) == (kind, rate)


def test_tail_of_alternating_and_tabulated():
    alt = WarpingProfile([Segment(Linear(4.0), 0.0, 1.0), Segment(Alternating(0.5, 4.0), 1.0, INF)])
    tail = alt.tail_class()
    assert tail.kind == "oscillating"
    # lower envelope t^beta has growth exponent beta
    assert tail.lower_decay == -0.5 and tail.upper_decay == -1.0
    tab = WarpingProfile([Segment(Tabulated((0.0, 1.0, 2.0), (0.5, 1.0, 1.5)), 0.0, INF)])
    assert tab.tail_class().kind == "undetermined"


def test_parse_euclidean_and_cusp():
    h = parse_spec("segment power 1 1 0 inf\n")
    assert h(3.0) == 3.0
    c = parse_spec("segment linear 0.36787944117144233 0 1\nsegment exponential 1 -1 1 inf\n")
    assert c(1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("segment power 1 1 0 2\nsegment power 1 1 1 inf\n", "overlaps"),
        ("segment power 1 1 0 1\nsegment power 1 1 2 inf\n", "gap"),
        ("segment power 1 1 0 1\n", "inf"),
        ("segment power 1 1 1 inf\n", "start at 0"),
        ("segment constant -1 0 inf\n", "positive"),
        ("segment wiggle 1 0 inf\n", "unknown segment kind"),
        ("segment power 1 0 inf\n", "2 parameters"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ProfileParseError, match=fragment):
        parse_spec(text)


def test_parse_error_names_segment_and_line():
    with pytest.raises(ProfileParseError) as info:
        parse_spec("# header\nsegment power 1 1 0 1\nsegment constant -2 1 inf\n")
    assert info.value.segment_index == 1


PROFILES = [
    euclidean_profile(),
    cusp_profile(),
    hyperbolic_profile(),
    WarpingProfile([Segment(Poly((1.0, 0.5, 0.25)), 0.0, 3.0), Segment(Power(0.25 * 13 / 9, 2.0), 3.0, INF)]),
    WarpingProfile([Segment(Linear(4.0), 0.0, 1.0), Segment(Alternating(0.5, 4.0), 1.0, INF)],
                   smoothing_width=0.1),
    WarpingProfile([Segment(Tabulated((0.0, 1.0, 2.0, 4.0), (0.1, 1.0, 1.5, 2.0)), 0.0, 4.0),
                    Segment(Constant(2.0), 4.0, INF)]),
]


@pytest.mark.parametrize("profile", PROFILES)
def test_render_round_trip(profile):
    again = parse_spec(profile.render())
    ts = np.geomspace(1e-3, 200.0, 100)
    assert np.array_equal(again(ts), profile(ts))


@pytest.mark.parametrize("profile", PROFILES)
def test_derivative_matches_central_difference(profile):
    for seg in profile.segments:
        hi = seg.hi if seg.hi < INF else seg.lo + 20.0
        lo = max(seg.lo, 1e-3)
        for t in np.linspace(lo, hi, 102)[1:-1]:
            if profile.kinks(t - 1e-5, t + 1e-5):
                continue
            d = 1e-6 * max(1.0, t)
            fd = (profile(t + d) - profile(t - d)) / (2 * d)
            an = profile.derivative(t)
            assert abs(an - fd) <= 1e-6 * (1 + abs(an))


@pytest.mark.parametrize("profile", PROFILES)
def test_positive_on_log_grid(profile):
    assert np.all(profile(np.geomspace(1e-4, 700.0, 1000)) > 0)


@pytest.mark.parametrize("k", [-2.0, -0.5, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("profile", PROFILES[:5])
def test_pow_integral_against_quadrature(profile, k):
    from scipy.integrate import quad

    a, b = 0.5, 9.5
    pts = profile.kinks(a, b)
    ref = quad(lambda t: profile(t) ** k, a, b, points=pts or None, limit=500, epsabs=1e-13, epsrel=1e-12)[0]
    assert profile.pow_integral(k, a, b) == pytest.approx(ref, rel=1e-9)


def test_pow_integral_infinite_tail():
    assert cusp_profile().pow_integral(1.0, 1.0, INF) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert euclidean_profile().pow_integral(-2.0, 1.0, INF) == pytest.approx(1.0, rel=1e-14)
    assert euclidean_profile().pow_integral(-1.0, 1.0, INF) == INF


def test_sinh_pow_integral_closed_form():
    s = Sinh(1.0, 1.0)
    assert s.pow_integral(1, 0.0, 2.0) == pytest.approx(math.cosh(2.0) - 1.0, rel=1e-14)


def test_alternating_shape_matches_construction():
    alt = Alternating(0.5, 4.0, 0.1)
    for j in range(3):
        for t in np.linspace(4 * j + 1, 4 * j + 2, 7):
            assert alt(t) == pytest.approx(4.0 * t, rel=1e-15)
        for t in np.linspace(4 * j + 3, 4 * j + 3.999, 7):
            assert alt(t) == pytest.approx(t ** 0.5, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(t=st.floats(1.0, 500.0))
def test_alternating_above_lower_envelope(t):
    assert Alternating(0.5, 4.0, 0.1)(t) >= t ** 0.5 * (1 - 1e-15)


def test_tabulated_holds_end_values():
    tab = Tabulated((1.0, 2.0, 3.0), (1.0, 4.0, 2.0))
    assert tab(10.0) == 2.0 and tab(0.5) == 1.0
    assert tab.derivative(10.0) == 0.0
    assert tab.pow_integral(1, 0.0, 5.0) == pytest.approx(1.0 + float(tab._interp.integrate(1, 3)) + 4.0)


def test_segment_validation():
    with pytest.raises(ValueError):
        Segment(Constant(1.0), 2.0, 1.0)
    with pytest.raises(ValueError):
        Alternating(0.5, 4.0, 1.5)


def test_pow_integral_overflow_is_infinite():
    from modelcap.geometry import cusp
    from modelcap.capacity import cap_exact_model

    M = cusp(2)
    assert M.h.pow_integral(-1, 1.0, 1000.0) == math.inf
    assert cap_exact_model(M, 2, 1.0, 1000.0) == 0.0
