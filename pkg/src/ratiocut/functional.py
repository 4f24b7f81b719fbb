"""The ratio cut functional on parametrised and general curvilinear domains.

A cut is a circular arc between a point on the bottom curve and a point on
the top curve.  The ratio cut is

    RC = arc_length / (A_L * A_R)

with ``A_L`` and ``A_R`` the areas on either side (wings included).  With
``normalized=True`` the value is multiplied by the total area, which makes
it scale invariant.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import numerics
from .errors import DomainError, GeometryError
from .geometry import (
    DEFAULT_GATE,
    ArcGeometry,
    BoundaryCurve,
    CircularArc,
    CutParams,
    DomainParams,
    Segment,
    _sigma,
    arc_length,
    arc_radius,
    arc_points,
    bottom_height,
    cap_area,
    circle_through,
    parabolic_bottom,
    parabolic_top,
    stokes_area,
    top_height,
)

#: number of interior arc samples used to check that a cut stays inside
ARC_SAMPLES = 32
_ARC_T = (np.arange(ARC_SAMPLES) + 0.5) / ARC_SAMPLES
_INSIDE_TOL = 1e-12

#: finite-difference step for gradients and Hessians (see numerics)
FD_STEP = 1e-3


@dataclass(frozen=True)
class RatioCutBreakdown:
    cut: CutParams
    cut_length: float
    chord: float
    area_left: float
    area_right: float
    total_area: float
    value: float
    normalized: bool = False
    arc: ArcGeometry | None = None  # None marks a straight cut

    @property
    def straight(self) -> bool:
        return self.arc is None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["straight"] = self.straight
        return d


def _as_cut(cut) -> CutParams:
    if isinstance(cut, CutParams):
        return cut
    if isinstance(cut, dict):
        return CutParams(**cut)
    return CutParams.from_array(cut)


def _as_matrix(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[-1] != 3:
        raise DomainError("cuts must be (q, p, theta) triples")
    return X


class CutFunctional:
    """Common evaluation, derivative and breakdown logic."""

    normalized = False
    q_bounds = (0.0, 1.0)
    p_bounds = (0.0, 1.0)

    # subclasses provide: _endpoints, _left_raw, total_area, _inside
    def _endpoints(self, Q, P):
        raise NotImplementedError

    def _left_raw(self, Q, P, bq, tp):
        """Area left of the chord (no cap, no wing)."""
        raise NotImplementedError

    def _inside(self, x, y):
        raise NotImplementedError

    @property
    def wing_left(self) -> float:
        return 0.0

    def evaluate(self, Q, P, T, check=True) -> dict:
        """Vectorised evaluation; invalid cuts get ``value = inf``."""
        Q, P, T = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (Q, P, T)))
        (ql, qh), (pl, ph) = self.q_bounds, self.p_bounds
        tol = 1e-12
        valid = (Q >= ql - tol) & (Q <= qh + tol) & (P >= pl - tol) & (P <= ph + tol)
        valid &= np.isfinite(T) & (np.abs(T) < np.pi)
        Qc = np.clip(Q, ql, qh)
        Pc = np.clip(P, pl, ph)
        Tc = np.where(valid, T, 0.0)
        bq, tp = self._endpoints(Qc, Pc)
        chord = np.hypot(tp[0] - bq[0], tp[1] - bq[1])
        valid &= chord > 0
        chord_safe = np.where(chord > 0, chord, 1.0)
        cap = cap_area(chord_safe, Tc)
        area_left = self._left_raw(Qc, Pc, bq, tp) + cap + self.wing_left
        total = self.total_area
        area_right = total - area_left
        length = arc_length(chord_safe, Tc)
        valid &= (area_left > 0) & (area_right > 0)
        if check and np.any(valid):
            x, y = arc_points(bq[0], bq[1], tp[0], tp[1], Tc, _ARC_T)
            valid &= np.all(self._inside(x, y), axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = length / (area_left * area_right)
            if self.normalized:
                value = value * total
        value = np.where(valid, value, np.inf)
        return {
            "value": value,
            "valid": valid,
            "cut_length": length,
            "chord": chord,
            "area_left": area_left,
            "area_right": area_right,
            "bottom_point": bq,
            "top_point": tp,
        }

    def values(self, X, check=False):
        X = _as_matrix(X)
        return self.evaluate(X[:, 0], X[:, 1], X[:, 2], check=check)["value"]

    def value(self, cut, check=True) -> float:
        return self.breakdown(cut, check=check).value

    def breakdown(self, cut, check=True) -> RatioCutBreakdown:
        c = _as_cut(cut)
        (ql, qh), (pl, ph) = self.q_bounds, self.p_bounds
        if not (ql - 1e-12 <= c.q <= qh + 1e-12 and pl - 1e-12 <= c.p <= ph + 1e-12):
            raise DomainError(f"cut endpoints q={c.q}, p={c.p} outside the boundary curves")
        if abs(c.theta) >= np.pi:
            raise DomainError("opening angle must satisfy |theta| < pi")
        r = self.evaluate(c.q, c.p, c.theta, check=check)
        if not bool(r["valid"]):
            if float(r["area_left"]) <= 0 or float(r["area_right"]) <= 0:
                raise GeometryError("cut leaves an empty region on one side")
            raise GeometryError(f"arc of cut {c} exits the domain")
        bq = tuple(float(v) for v in r["bottom_point"])
        tp = tuple(float(v) for v in r["top_point"])
        # angles so small that the radius overflows are straight to machine precision
        straight = c.theta == 0 or not np.isfinite(arc_radius(float(r["chord"]), c.theta))
        arc = None if straight else circle_through(bq, tp, c.theta)
        return RatioCutBreakdown(
            cut=c,
            cut_length=float(r["cut_length"]),
            chord=float(r["chord"]),
            area_left=float(r["area_left"]),
            area_right=float(r["area_right"]),
            total_area=float(self.total_area),
            value=float(r["value"]),
            normalized=self.normalized,
            arc=arc,
        )

    def cut_arc(self, cut) -> BoundaryCurve:
        """The cut as a boundary curve from its bottom to its top endpoint."""
        c = _as_cut(cut)
        bq, tp = self._endpoints(np.asarray(c.q), np.asarray(c.p))
        p0 = (float(bq[0]), float(bq[1]))
        p1 = (float(tp[0]), float(tp[1]))
        return Segment(p0, p1) if c.theta == 0 else CircularArc(p0, p1, c.theta)

    def _checked_values(self, X):
        v = self.values(X, check=False)
        if not np.all(np.isfinite(v)):
            raise GeometryError("finite-difference stencil left the admissible cut region")
        return v

    def gradient(self, cut, h=FD_STEP) -> np.ndarray:
        return numerics.gradient(self._checked_values, _as_cut(cut).as_array(), h)

    def hessian(self, cut, h=FD_STEP) -> np.ndarray:
        return numerics.hessian(self._checked_values, _as_cut(cut).as_array(), h)

    def base_cut(self) -> CutParams:
        return CutParams(sum(self.q_bounds) / 2.0, sum(self.p_bounds) / 2.0, 0.0)

    def seed_cut(self) -> CutParams:
        return self.base_cut()


class ParabolicModel(CutFunctional):
    """Closed-form ratio cut on the parabolic trapezoid ``sigma``."""

    def __init__(self, sigma=None, normalized=False, gate=DEFAULT_GATE):
        self.sigma = _sigma(sigma)
        if gate is not None:
            self.sigma.check_gate(gate)
        self.normalized = normalized
        self.gate = gate

    def __repr__(self):
        return f"ParabolicModel({self.sigma!r}, normalized={self.normalized})"

    @property
    def total_area(self) -> float:
        s = self.sigma
        return s.height + (s.a1 + s.a2) / 2.0 - s.a3 / 2.0 - s.eps_t / 6.0 + s.eps_b / 6.0 + s.A_WL + s.A_WR

    @property
    def wing_left(self) -> float:
        return self.sigma.A_WL

    def _endpoints(self, Q, P):
        return (Q, bottom_height(self.sigma, Q)), (P, top_height(self.sigma, P))

    def _left_raw(self, Q, P, bq, tp):
        s = self.sigma
        yb, yt = bq[1], tp[1]
        return s.eps_b * Q**3 / 6.0 + 0.5 * (Q * yt - P * yb) - s.eps_t * P**3 / 6.0 + (s.a1 + s.height) * P / 2.0

    def _inside(self, x, y):
        tol = _INSIDE_TOL
        return (
            (x >= -tol)
            & (x <= 1 + tol)
            & (y >= bottom_height(self.sigma, x) - tol)
            & (y <= top_height(self.sigma, x) + tol)
        )

    def seed_cut(self) -> CutParams:
        from .perturbation.expansion import predict_cut

        try:
            return predict_cut(self.sigma, order="full", gate=None)
        except Exception:
            return self.base_cut()

    def domain(self) -> "Domain":
        return Domain.from_sigma(self.sigma, normalized=self.normalized)


def _point_in_polygon(x, y, poly):
    """Even-odd rule; ``x``, ``y`` any shape, ``poly`` (n, 2) closed implicitly."""
    px = poly[:, 0]
    py = poly[:, 1]
    qx = np.roll(px, -1)
    qy = np.roll(py, -1)
    X = np.asarray(x)[..., None]
    Y = np.asarray(y)[..., None]
    straddle = (py > Y) != (qy > Y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = px + (Y - py) * (qx - px) / (qy - py)
    crossing = straddle & (X < xint)
    return (np.sum(crossing, axis=-1) % 2) == 1


class Domain(CutFunctional):
    """Curvilinear quadrilateral with graph-type bottom and top curves.

    ``bottom`` and ``top`` run left to right; ``left`` runs from the
    bottom-left to the top-left corner and ``right`` from the bottom-right
    to the top-right corner.  Optional wing areas are added to either side.
    """

    def __init__(self, bottom, right, top, left, A_WL=0.0, A_WR=0.0, normalized=False, samples=256):
        self.bottom, self.right, self.top, self.left = bottom, right, top, left
        self.A_WL = float(A_WL)
        self.A_WR = float(A_WR)
        self.normalized = normalized
        self.q_bounds = bottom.x_range
        self.p_bounds = top.x_range
        self._loop_area = stokes_area(self.loop())
        t = np.linspace(0.0, 1.0, samples, endpoint=False)
        pieces = [np.stack(c.point(t), axis=-1) for c in self.loop()]
        self._polygon = np.concatenate(pieces)
        self._left_integral = float(left.line_integral())

    @classmethod
    def from_sigma(cls, sigma, normalized=False) -> "Domain":
        s = _sigma(sigma)
        bottom = parabolic_bottom(s)
        top = parabolic_top(s)
        return cls(
            bottom,
            Segment(bottom.end, top.end),
            top,
            Segment(bottom.start, top.start),
            A_WL=s.A_WL,
            A_WR=s.A_WR,
            normalized=normalized,
        )

    def loop(self) -> list:
        return [self.bottom, self.right, self.top.reversed(), self.left.reversed()]

    @property
    def total_area(self) -> float:
        return self._loop_area + self.A_WL + self.A_WR

    @property
    def wing_left(self) -> float:
        return self.A_WL

    def _endpoints(self, Q, P):
        self._tq = self.bottom.t_at_x(Q)
        self._tp = self.top.t_at_x(P)
        return self.bottom.point(self._tq), self.top.point(self._tp)

    def _left_raw(self, Q, P, bq, tp):
        return (
            self.bottom.line_integral(0.0, self._tq)
            + 0.5 * (bq[0] * tp[1] - tp[0] * bq[1])
            - self.top.line_integral(0.0, self._tp)
            - self._left_integral
        )

    def _inside(self, x, y):
        return _point_in_polygon(x, y, self._polygon)

    def split(self, cut):
        """Boundary loops of the two sides of ``cut`` (counter-clockwise)."""
        c = _as_cut(cut)
        tq = float(self.bottom.t_at_x(c.q))
        tp = float(self.top.t_at_x(c.p))
        b_left, b_right = self.bottom.split(tq)
        t_left, t_right = self.top.split(tp)
        arc = self.cut_arc(c)
        left_loop = [b_left, arc, t_left.reversed(), self.left.reversed()]
        right_loop = [b_right, self.right, t_right.reversed(), arc.reversed()]
        return left_loop, right_loop


# ---------------------------------------------------------------------------
# functional API on the parametrised family
# ---------------------------------------------------------------------------

def total_area(sigma, gate=DEFAULT_GATE) -> float:
    """Area of the parabolic trapezoid plus both wings."""
    return ParabolicModel(sigma, gate=gate).total_area


def left_area(sigma, cut, gate=DEFAULT_GATE) -> float:
    """Area left of the cut, including the left wing and the signed arc cap."""
    return ParabolicModel(sigma, gate=gate).breakdown(cut).area_left


def ratio_cut(sigma, cut, normalized=False, gate=DEFAULT_GATE, check=True) -> RatioCutBreakdown:
    return ParabolicModel(sigma, normalized=normalized, gate=gate).breakdown(cut, check=check)


def rc_gradient(sigma, cut, h=FD_STEP, normalized=False, gate=DEFAULT_GATE) -> np.ndarray:
    return ParabolicModel(sigma, normalized=normalized, gate=gate).gradient(cut, h)


def rc_hessian(sigma, cut, h=FD_STEP, normalized=False, gate=DEFAULT_GATE) -> np.ndarray:
    return ParabolicModel(sigma, normalized=normalized, gate=gate).hessian(cut, h)


def rc_batch(X, height=0.5):
    """Closed-form ``RC`` for rows ``(q, p, theta, a1, a2, a3, eps_t, eps_b, A_WL, A_WR)``.

    No inside-the-domain check; used by derivative audits where both the
    cut and the domain parameters vary along the stencil.
    """
    X = np.asarray(X, dtype=float)
    q, p, t, a1, a2, a3, et, eb, wl, wr = X.T
    yb = eb * q * q + (a3 - eb) * q
    yt = et * p * p + (a2 - a1 - et) * p + a1 + height
    chord = np.hypot(p - q, yt - yb)
    left = eb * q**3 / 6.0 + 0.5 * (q * yt - p * yb) - et * p**3 / 6.0 + (a1 + height) * p / 2.0
    left = left + cap_area(chord, t) + wl
    total = height + (a1 + a2) / 2.0 - a3 / 2.0 - et / 6.0 + eb / 6.0 + wl + wr
    return arc_length(chord, t) / (left * (total - left))
