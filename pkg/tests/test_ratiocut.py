from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ratiocut.errors import GeometryError, OutOfRegimeError
from ratiocut.functional import (
    Domain,
    ParabolicModel,
    left_area,
    ratio_cut,
    rc_batch,
    rc_gradient,
    rc_hessian,
    total_area,
)
from ratiocut.geometry import CutParams, DomainParams, Segment, arc_length, cap_area, curve_eval, parabolic_bottom, parabolic_top
from ratiocut.optimize import brute_force_cut, brute_force_search, optimize_cut
from ratiocut.rectangle import (
    ADJACENT_FACTOR,
    lemma2_area_bound,
    lemma2_check,
    rectangle_brute_force,
    rectangle_ratio_cut,
)

S = DomainParams
C = CutParams
gated = st.floats(-0.1, 0.1, allow_nan=False)
sigmas = st.builds(DomainParams, gated, gated, gated, gated, gated, st.floats(0, 0.05), st.floats(0, 0.05))
near_cuts = st.builds(CutParams, st.floats(0.4, 0.6), st.floats(0.4, 0.6), st.floats(-0.3, 0.3))


def _random_sigmas(n, scale, seed):
    rng = np.random.default_rng(seed)
    return [S(*rng.uniform(-scale, scale, 7)) for _ in range(n)]


# ---------------------------------------------------------------------------
# areas
# ---------------------------------------------------------------------------

def test_total_area_examples():
    assert total_area(S()) == pytest.approx(0.5, abs=1e-15)
    assert total_area(S(A_WL=0.05)) == pytest.approx(0.55, abs=1e-15)
    # ε_t = 0.3 sits above the default gate; with the gate lifted the area is 1/2 - 0.3/6
    with pytest.raises(OutOfRegimeError):
        total_area(S(eps_t=0.3))
    assert total_area(S(eps_t=0.3), gate=None) == pytest.approx(0.45, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(sigmas)
def test_total_area_closed_form_and_quadrature(s):
    closed = 0.5 + (s.a1 + s.a2) / 2 - s.a3 / 2 - s.eps_t / 6 + s.eps_b / 6 + s.A_WL + s.A_WR
    top, bot = parabolic_top(s), parabolic_bottom(s)
    ref, _ = quad(lambda x: curve_eval(top, x) - curve_eval(bot, x), 0, 1, epsabs=1e-13)
    assert total_area(s) == pytest.approx(closed, abs=1e-12)
    assert total_area(s) == pytest.approx(ref + s.A_WL + s.A_WR, abs=1e-9)


def test_left_area_examples():
    assert left_area(S(), C()) == pytest.approx(0.25, abs=1e-15)
    assert left_area(S(), C(0.5, 0.5, 0.2)) == pytest.approx(0.25 + cap_area(0.5, 0.2), abs=1e-13)
    assert left_area(S(), C(0.5, 0.5, 0.2)) == pytest.approx(0.254172, abs=1e-6)
    assert left_area(S(), C(0.4, 0.6, 0.0)) == pytest.approx(0.25, abs=1e-15)


def test_left_area_includes_wing():
    assert left_area(S(A_WL=0.03), C()) == pytest.approx(0.28, abs=1e-15)


def test_arc_leaving_domain_is_reported():
    with pytest.raises(GeometryError):
        ratio_cut(S(), C(0.05, 0.05, -3.0))
    with pytest.raises(GeometryError):
        ratio_cut(S(), C(0.02, 0.02, -1.0))


# ---------------------------------------------------------------------------
# ratio cut value
# ---------------------------------------------------------------------------

def test_ratio_cut_examples():
    assert ratio_cut(S(), C()).value == pytest.approx(8.0, abs=1e-12)
    b = ratio_cut(S(), C(0.5, 0.5, 0.2))
    expected = arc_length(0.5, 0.2) / ((0.25 + cap_area(0.5, 0.2)) * (0.25 - cap_area(0.5, 0.2)))
    assert b.value == pytest.approx(expected, rel=1e-12)
    assert b.value == pytest.approx(8.0155, abs=1e-4)
    # quadratic expansion 8 + 7/18 θ^2 agrees to O(θ^4)
    assert b.value == pytest.approx(8 + 7 / 18 * 0.04, abs=1e-4)


def test_optimum_improves_on_base_cut():
    s = S(a1=0.1)
    assert optimize_cut(s).breakdown.value < ratio_cut(s, C()).value


def test_normalized_variant():
    s = S(a1=0.05, eps_b=0.02, A_WR=0.01)
    cut = C(0.48, 0.52, 0.05)
    plain = ratio_cut(s, cut)
    norm = ratio_cut(s, cut, normalized=True)
    assert norm.value == pytest.approx(plain.value * plain.total_area, rel=1e-14)
    assert norm.normalized and not plain.normalized


@settings(max_examples=60, deadline=None)
@given(sigmas, near_cuts)
def test_breakdown_invariants(s, cut):
    b = ratio_cut(s, cut)
    assert b.value == pytest.approx(b.cut_length / (b.area_left * b.area_right), rel=1e-12)
    assert b.area_left + b.area_right == pytest.approx(total_area(s), abs=1e-9)
    if b.arc is not None:
        assert b.arc.chord == pytest.approx(2 * b.arc.radius * math.sin(abs(b.arc.opening_angle) / 2), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(sigmas, near_cuts)
def test_mirror_symmetry(s, cut):
    a = ratio_cut(s, cut).value
    b = ratio_cut(s.mirror(), cut.mirror()).value
    assert a == pytest.approx(b, rel=1e-10)


def test_batch_matches_scalar():
    rng = np.random.default_rng(3)
    cuts = np.column_stack([rng.uniform(0.4, 0.6, 20), rng.uniform(0.4, 0.6, 20), rng.uniform(-0.3, 0.3, 20)])
    sig = rng.uniform(-0.1, 0.1, (20, 7))
    vals = rc_batch(np.hstack([cuts, sig]))
    for c, s, v in zip(cuts, sig, vals):
        assert v == pytest.approx(ratio_cut(S(*s), C(*c)).value, rel=1e-12)


def test_general_domain_matches_parabolic_model():
    s = S(a1=0.04, a2=-0.03, a3=0.02, eps_t=0.05, eps_b=-0.04, A_WL=0.01, A_WR=0.02)
    model = ParabolicModel(s)
    dom = Domain.from_sigma(s)
    for cut in (C(), C(0.45, 0.55, 0.1), C(0.52, 0.47, -0.2)):
        assert dom.value(cut) == pytest.approx(model.value(cut), rel=1e-12)


def test_scaled_rectangle_value_scales_inversely():
    for k in (0.5, 1.0, 3.0):
        a, b = 2 * k, k
        dom = Domain(Segment((0, 0), (a, 0)), Segment((a, 0), (a, b)), Segment((0, b), (a, b)), Segment((0, 0), (0, b)), normalized=True)
        assert dom.value(C(a / 2, a / 2, 0.0)) == pytest.approx(4 / a, rel=1e-13)
        assert rectangle_ratio_cut(a, b).value == pytest.approx(4 / a, rel=1e-15)
        assert rectangle_ratio_cut(a, b).position == pytest.approx(a / 2)


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------

def test_gradient_and_hessian_at_base():
    assert np.allclose(rc_gradient(S(), C()), 0.0, atol=1e-8)
    H = rc_hessian(S(), C())
    J = np.array([[48, -16, 4 / 3], [-16, 48, 4 / 3], [4 / 3, 4 / 3, 7 / 9]])
    assert np.allclose(H, J, atol=1e-5)
    assert np.allclose(H, H.T, atol=1e-6)


def test_gradient_off_base():
    # J @ (0.01, 0, 0) plus a cubic correction of order 1e-4
    g = rc_gradient(S(), C(0.51, 0.5, 0.0))
    assert np.allclose(g, [0.48, -0.16, 0.013333], atol=5e-4)


# ---------------------------------------------------------------------------
# optimisation
# ---------------------------------------------------------------------------

def test_optimize_base():
    rep = optimize_cut(S())
    assert rep.cut.as_array() == pytest.approx([0.5, 0.5, 0.0], abs=1e-10)
    assert rep.breakdown.value == pytest.approx(8.0, abs=1e-12)
    assert rep.hessian_psd


def test_optimize_single_corner():
    a = 0.1
    q, p, th = optimize_cut(S(a2=a)).cut.as_array()
    assert abs(q - (0.5 + a / 12)) <= 5 * a * a
    assert abs(p - (0.5 - a / 6)) <= 5 * a * a
    assert abs(th - a) <= 5 * a * a
    # raising the other top corner gives the mirror image
    m = optimize_cut(S(a1=a)).cut
    assert m.as_array() == pytest.approx([1 - q, 1 - p, -th], abs=1e-8)


def test_optimize_symmetric_wings():
    rep = optimize_cut(S(A_WL=0.05, A_WR=0.05))
    assert rep.cut.as_array() == pytest.approx([0.5, 0.5, 0.0], abs=1e-10)


def test_optimize_gradient_small_on_random_sigma():
    for s in _random_sigmas(25, 0.1, seed=11):
        rep = optimize_cut(s)
        assert rep.gradient_norm <= 1e-8
        assert rep.hessian_psd
        assert np.linalg.norm(rc_gradient(s, rep.cut)) <= 1e-6


def test_brute_force_base_is_grid_aligned():
    cut = brute_force_cut(S(), n=41)
    assert cut.as_array() == pytest.approx([0.5, 0.5, 0.0], abs=1e-12)


def test_brute_force_agrees_with_optimizer():
    s = S(a1=0.1)
    cut = brute_force_cut(s, n=81)
    cell = np.array([0.4 / 80, 0.4 / 80, 0.8 / 80])
    assert np.all(np.abs(cut.as_array() - optimize_cut(s).cut.as_array()) <= cell)


def test_brute_force_rejects_coarse_grid():
    with pytest.raises(ValueError):
        brute_force_search(S(), n=5)


# ---------------------------------------------------------------------------
# rectangles and the cap bound
# ---------------------------------------------------------------------------

def test_rectangle_examples():
    r = rectangle_ratio_cut(2.0, 1.0)
    assert r.value == 2.0 and r.position == 1.0 and not r.degenerate
    r = rectangle_ratio_cut(1.0, 1.0)
    assert r.value == 4.0 and r.degenerate
    r = rectangle_ratio_cut(1.0, 0.5)
    assert r.value == 4.0 and r.position == 0.5


def test_rectangle_brute_force_coarse():
    best = rectangle_brute_force(2.0, 1.0, per_side=40, n_theta=9)
    opp = best["opposite"]
    assert opp.value == pytest.approx(2.0, rel=1e-12)
    assert opp.theta == 0.0
    assert opp.p0[0] == pytest.approx(1.0) and opp.p1[0] == pytest.approx(1.0)
    assert best["adjacent"].value >= ADJACENT_FACTOR / 2.0


def test_cap_bound_examples():
    assert lemma2_area_bound(1.0, 0.0) == 0.0
    r = lemma2_check(1.0, 0.2, eps0=0.01)
    assert r["excess"] == pytest.approx(0.0016686, abs=1e-7)
    assert r["bound"] == pytest.approx(1.01 / math.sqrt(6) * math.sqrt(r["excess"]), rel=1e-12)
    assert r["bound"] == pytest.approx(0.016834, abs=1e-5)
    assert r["cap"] == pytest.approx(0.016689, abs=1e-6)
    assert r["holds"]
    assert lemma2_check(1.0, 0.4, eps0=0.05)["holds"]


def test_cap_bound_regime():
    from ratiocut.errors import DomainError

    with pytest.raises(DomainError):
        lemma2_area_bound(1.0, 0.2)
    with pytest.raises(DomainError):
        lemma2_area_bound(1.0, -0.01)


@given(st.floats(0.02, 0.6), st.floats(0.1, 3.0))
def test_cap_bound_holds_in_regime(theta, chord):
    r = lemma2_check(chord, theta, eps0=0.05)
    assert r["holds"]
