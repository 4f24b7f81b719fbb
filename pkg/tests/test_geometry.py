from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ratiocut.errors import DomainError, GeometryError, OrientationError, OutOfRegimeError
from ratiocut.geometry import (
    CircularArc,
    CutParams,
    DomainParams,
    QuadraticCurve,
    Segment,
    arc_length,
    arc_radius,
    bottom_height,
    cap_area,
    chord_length,
    circle_through,
    curve_eval,
    opening_angle_of,
    parabolic_bottom,
    parabolic_top,
    parabolic_trapezoid_loop,
    polygon_area,
    sagitta,
    stokes_area,
    top_height,
)

small = st.floats(-0.25, 0.25, allow_nan=False)
sigmas = st.builds(DomainParams, small, small, small, small, small)


# ---------------------------------------------------------------------------
# chords and arcs
# ---------------------------------------------------------------------------

def test_chord_length_examples():
    assert chord_length(DomainParams(), CutParams()) == pytest.approx(0.5, abs=1e-15)
    assert chord_length(DomainParams(), CutParams(0.0, 1.0, 0.0)) == pytest.approx(math.sqrt(1.25), rel=1e-15)
    # top height at x=1/2 with a1=0.1 is 1/2 + a1/2
    assert chord_length(DomainParams(a1=0.1), CutParams()) == pytest.approx(0.55, rel=1e-14)


def test_chord_length_rejects_out_of_range_endpoint():
    with pytest.raises(DomainError):
        chord_length(DomainParams(), CutParams(1.2, 0.5, 0.0))


def test_arc_radius_examples():
    assert arc_radius(1.0, math.pi) == pytest.approx(0.5, rel=1e-15)
    # 0.5 / (2 sin 0.05), high precision reference
    assert arc_radius(0.5, 0.1) == pytest.approx(5.00208394113244, rel=1e-13)


def test_arc_radius_straight_and_too_wide():
    # a straight cut has no finite circle
    assert arc_radius(0.5, 0.0) == math.inf
    with pytest.raises(DomainError):
        arc_radius(0.5, 3.5)


def test_cap_area_examples():
    assert cap_area(0.7, 0.0) == 0.0
    assert cap_area(2.0, math.pi - 1e-9) == pytest.approx(math.pi / 2, rel=1e-8)
    R = 1.0 / (2.0 * math.sin(0.1))
    exact = R * R / 2.0 * (0.2 - math.sin(0.2))
    assert cap_area(1.0, 0.2) == pytest.approx(exact, rel=1e-12)
    assert cap_area(1.0, 0.2) == pytest.approx(0.0166889, abs=1e-7)


def test_arc_length_examples():
    assert arc_length(0.5, 0.0) == 0.5
    assert arc_length(2.0, math.pi) == pytest.approx(math.pi, rel=1e-15)
    assert arc_length(0.5, 0.1) == pytest.approx(0.5 * 0.05 / math.sin(0.05), rel=1e-14)


def test_series_branches_are_continuous_at_cutoff():
    for f in (cap_area, arc_length, sagitta):
        below = f(1.0, 0.99999e-4)
        above = f(1.0, 1.00001e-4)
        assert abs(below - above) <= 1e-9 * max(1.0, abs(above))


@given(st.floats(0.01, 3.0), st.floats(-3.0, 3.0))
def test_cap_area_is_odd(c, th):
    assert cap_area(c, -th) == pytest.approx(-cap_area(c, th), rel=1e-12, abs=1e-15)


@given(st.floats(0.01, 3.0), st.floats(-0.3, 0.3))
def test_cap_area_series(c, th):
    assert abs(cap_area(c, th) - c * c * (th / 12 + th**3 / 360)) <= 1e-6 * c * c * abs(th) + 1e-15


@given(st.floats(0.01, 3.0), st.floats(-3.0, 3.0))
def test_arc_length_at_least_chord(c, th):
    L = arc_length(c, th)
    if th == 0.0:
        assert L == c
    else:
        assert L >= c
    if abs(th) > 1e-6:
        assert L > c
    if abs(th) <= 0.2:
        assert L - c == pytest.approx(c * th * th / 24, rel=th * th / 5 + 1e-9, abs=1e-15)


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

def test_curve_eval_examples():
    assert curve_eval(parabolic_top(DomainParams()), 0.3) == pytest.approx(0.5)
    assert curve_eval(parabolic_top(DomainParams(a1=0.1)), 1.0) == pytest.approx(0.5)
    assert curve_eval(parabolic_bottom(DomainParams(eps_b=0.2)), 0.5) == pytest.approx(-0.05, abs=1e-15)


def test_curve_eval_outside_interval():
    with pytest.raises(DomainError):
        curve_eval(parabolic_top(DomainParams()), 1.5)


@given(sigmas, st.floats(0.0, 1.0))
def test_parabolic_curves_match_polynomials(s, x):
    yt = s.eps_t * x * x + (s.a2 - s.a1 - s.eps_t) * x + s.a1 + 0.5
    yb = s.eps_b * x * x + (s.a3 - s.eps_b) * x
    assert curve_eval(parabolic_top(s), x) == pytest.approx(yt, abs=1e-12)
    assert curve_eval(parabolic_bottom(s), x) == pytest.approx(yb, abs=1e-12)
    assert top_height(s, x) == pytest.approx(yt, abs=1e-12)
    assert bottom_height(s, x) == pytest.approx(yb, abs=1e-12)


def test_curve_split_and_reverse():
    c = QuadraticCurve.graph(0.3, -0.1, 0.2)
    a, b = c.split(0.4)
    assert np.allclose(a.end, b.start)
    assert np.allclose(a.start, c.start) and np.allclose(b.end, c.end)
    r = c.reversed()
    assert np.allclose(r.start, c.end) and np.allclose(r.end, c.start)
    assert float(r.line_integral()) == pytest.approx(-float(c.line_integral()), abs=1e-15)


def test_circular_arc_geometry():
    arc = CircularArc((0.5, 0.0), (0.5, 0.5), 0.1)
    assert arc.radius == pytest.approx(arc_radius(0.5, 0.1), rel=1e-13)
    mid = np.array(arc.point(0.5))
    # positive sweep bulges towards +x for an upward chord
    assert mid[0] > 0.5
    assert mid[0] - 0.5 == pytest.approx(sagitta(0.5, 0.1), rel=1e-12)


# ---------------------------------------------------------------------------
# circles through two points
# ---------------------------------------------------------------------------

def test_circle_through_examples():
    g = circle_through((0.0, 0.0), (0.0, 1.0), math.pi)
    assert g.radius == pytest.approx(0.5)
    assert np.allclose(g.center, (0.0, 0.5), atol=1e-15)
    g = circle_through((0.5, 0.0), (0.5, 0.5), 0.1)
    assert g.radius == pytest.approx(5.00208394113244, rel=1e-13)
    assert g.center[0] < 0.5
    with pytest.raises(GeometryError):
        circle_through((0.2, 0.2), (0.2, 0.2), 0.1)


@given(
    st.tuples(st.floats(-2, 2), st.floats(-2, 2)),
    st.floats(0.05, 2.0),
    st.floats(0.0, 2 * math.pi),
    st.floats(0.01, 3.1) | st.floats(-3.1, -0.01),
)
def test_circle_through_round_trip(p0, length, direction, th):
    p1 = (p0[0] + length * math.cos(direction), p0[1] + length * math.sin(direction))
    g = circle_through(p0, p1, th)
    for p in (p0, p1):
        assert math.hypot(p[0] - g.center[0], p[1] - g.center[1]) == pytest.approx(g.radius, rel=1e-12)
    assert opening_angle_of(g, p0, p1) == pytest.approx(th, rel=1e-9)


# ---------------------------------------------------------------------------
# areas
# ---------------------------------------------------------------------------

def test_stokes_area_examples():
    assert stokes_area(parabolic_trapezoid_loop(DomainParams())) == pytest.approx(0.5, abs=1e-15)
    # 1/2 - eps_t/6 (exact integration of the top parabola)
    assert stokes_area(parabolic_trapezoid_loop(DomainParams(eps_t=0.3))) == pytest.approx(0.45, abs=1e-14)
    tri = [Segment((0, 0), (1, 0)), Segment((1, 0), (0, 1)), Segment((0, 1), (0, 0))]
    assert stokes_area(tri) == pytest.approx(0.5)
    assert polygon_area([(0, 0), (1, 0), (0, 1)]) == pytest.approx(0.5)


def test_stokes_area_errors():
    open_loop = [Segment((0, 0), (1, 0)), Segment((1, 0), (1, 1))]
    with pytest.raises(GeometryError):
        stokes_area(open_loop)
    cw = [Segment((0, 0), (0, 1)), Segment((0, 1), (1, 0)), Segment((1, 0), (0, 0))]
    with pytest.raises(OrientationError):
        stokes_area(cw)


def test_stokes_area_with_arc_side():
    # half disk: diameter plus semicircle
    arc = CircularArc((1.0, 0.0), (-1.0, 0.0), math.pi - 1e-12)
    loop = [Segment((-1.0, 0.0), (1.0, 0.0)), arc]
    assert stokes_area(loop) == pytest.approx(math.pi / 2, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(sigmas)
def test_stokes_area_matches_quadrature(s):
    top, bot = parabolic_top(s), parabolic_bottom(s)
    ref, _ = quad(lambda x: curve_eval(top, x) - curve_eval(bot, x), 0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    assert stokes_area(parabolic_trapezoid_loop(s)) == pytest.approx(ref, abs=1e-9)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

def test_gate():
    DomainParams(a1=0.25).check_gate()
    with pytest.raises(OutOfRegimeError, match="eps_t"):
        DomainParams(eps_t=-0.3).check_gate()
    DomainParams(eps_t=-0.3).check_gate(0.5)


def test_from_array_and_mirror():
    s = DomainParams.from_array([0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07])
    assert s.as_array().tolist() == [0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07]
    with pytest.raises(DomainError):
        DomainParams.from_array([1, 2, 3])
    m = s.mirror()
    assert m.A_WL == s.A_WR and m.A_WR == s.A_WL
    assert m.mirror().as_array() == pytest.approx(s.as_array(), abs=1e-15)


@given(sigmas, st.floats(0.0, 1.0))
def test_mirror_reflects_curves(s, x):
    m = s.mirror()
    # mirrored domain is the reflection x -> 1-x shifted down by a3
    assert top_height(m, x) == pytest.approx(top_height(s, 1 - x) - s.a3, abs=1e-12)
    assert bottom_height(m, x) == pytest.approx(bottom_height(s, 1 - x) - s.a3, abs=1e-12)
