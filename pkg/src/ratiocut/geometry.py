"""Chords, circular arcs, boundary curves and Stokes-theorem areas.

All scalar primitives accept numpy arrays and broadcast.  Boundary curves
are parametrised on ``t in [0, 1]`` and expose the line integral
``1/2 * int(x dy - y dx)`` in closed form, so that every region area in the
package is assembled from exact pieces rather than quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Sequence

import numpy as np

from .errors import DomainError, GeometryError, OrientationError, OutOfRegimeError

PARAM_NAMES = ("a1", "a2", "a3", "eps_t", "eps_b", "A_WL", "A_WR")

#: Below this opening angle the closed forms switch to their Taylor series.
SERIES_CUTOFF = 1e-4

DEFAULT_GATE = 0.25


@dataclass(frozen=True)
class DomainParams:
    """Parabolic trapezoid of width one with black-box wings.

    Corners are ``(0, 0)``, ``(0, height + a1)``, ``(1, height + a2)`` and
    ``(1, a3)``.  ``height`` is 1/2 for the 2:1 reference rectangle that
    the series expansion is built around; other values are only used by the
    dynamics module for near-square children.
    """

    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    eps_t: float = 0.0
    eps_b: float = 0.0
    A_WL: float = 0.0
    A_WR: float = 0.0
    height: float = 0.5

    @classmethod
    def from_array(cls, values, height: float = 0.5) -> "DomainParams":
        values = np.asarray(values, dtype=float).ravel()
        if values.size != 7:
            raise DomainError(f"expected 7 parameters, got {values.size}")
        return cls(*(float(v) for v in values), height=height)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in PARAM_NAMES], dtype=float)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    def with_(self, **changes) -> "DomainParams":
        return replace(self, **changes)

    def check_gate(self, gate: float = DEFAULT_GATE) -> "DomainParams":
        worst = self.norm_inf()
        if worst > gate:
            name = PARAM_NAMES[int(np.argmax(np.abs(self.as_array())))]
            raise OutOfRegimeError(
                f"parameter {name} has magnitude {worst:.4g} above the validity gate {gate:g}"
            )
        return self

    def mirror(self) -> "DomainParams":
        """Reflect x -> 1 - x and shift vertically so the new bottom-left corner is the origin."""
        return DomainParams(
            a1=self.a2 - self.a3,
            a2=self.a1 - self.a3,
            a3=-self.a3,
            eps_t=self.eps_t,
            eps_b=self.eps_b,
            A_WL=self.A_WR,
            A_WR=self.A_WL,
            height=self.height,
        )


@dataclass(frozen=True)
class CutParams:
    """Circular-arc cut from ``(q, y_B(q))`` to ``(p, y_T(p))``.

    ``theta > 0`` bulges the arc towards increasing x, so the cap between
    chord and arc is added to the left region.
    """

    q: float = 0.5
    p: float = 0.5
    theta: float = 0.0

    @classmethod
    def from_array(cls, values) -> "CutParams":
        q, p, theta = (float(v) for v in np.asarray(values, dtype=float).ravel())
        return cls(q, p, theta)

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.p, self.theta], dtype=float)

    def mirror(self) -> "CutParams":
        return CutParams(1.0 - self.q, 1.0 - self.p, -self.theta)


@dataclass(frozen=True)
class ArcGeometry:
    radius: float
    center: tuple
    chord: float
    opening_angle: float


# ---------------------------------------------------------------------------
# scalar primitives
# ---------------------------------------------------------------------------

def _theta_minus_sin(theta):
    """theta - sin(theta) without cancellation for small theta."""
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < 0.5
    ts = np.where(small, theta, 0.0)
    t2 = ts * ts
    # Horner form of sum_{k>=1} (-1)^(k+1) t^(2k+1) / (2k+1)!
    series = 0.0
    for k in range(8, 0, -1):
        series = 1.0 / math.factorial(2 * k + 1) * (-1) ** (k + 1) + t2 * series
    series = series * t2 * ts
    return np.where(small, series, theta - np.sin(theta))


def _angle_over_sin_half(theta):
    """theta / sin(theta / 2), equal to 2 at theta = 0."""
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < SERIES_CUTOFF
    t2 = theta * theta
    safe = np.where(small, 1.0, theta)
    return np.where(small, 2.0 * (1.0 + t2 / 24.0 + 7.0 * t2 * t2 / 5760.0), safe / np.sin(safe / 2.0))


def _check_angle(theta, allow_pi=True):
    a = np.abs(np.asarray(theta, dtype=float))
    bad = a > math.pi if allow_pi else a >= math.pi
    if np.any(bad) or np.any(~np.isfinite(a)):
        raise DomainError("opening angle must satisfy |theta| <= pi")


def arc_radius(chord, theta):
    """Radius of the circle through two points ``chord`` apart subtending ``theta``.

    Returns ``inf`` for ``theta == 0`` (a straight cut; callers use the chord).
    """
    _check_angle(theta)
    chord = np.asarray(chord, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(chord <= 0):
        raise DomainError("chord must be positive")
    with np.errstate(divide="ignore"):
        r = np.where(theta == 0, np.inf, chord / (2.0 * np.abs(np.sin(theta / 2.0))))
    return float(r) if r.ndim == 0 else r


def cap_area(chord, theta):
    """Signed area between a chord and its circular arc (odd in ``theta``)."""
    _check_angle(theta)
    chord = np.asarray(chord, dtype=float)
    theta = np.asarray(theta, dtype=float)
    c2 = chord * chord
    small = np.abs(theta) < SERIES_CUTOFF
    safe = np.where(small, 1.0, theta)
    closed = c2 * _theta_minus_sin(safe) / (8.0 * np.sin(safe / 2.0) ** 2)
    series = c2 * (theta / 12.0 + theta**3 / 360.0)
    out = np.where(small, series, closed)
    return float(out) if out.ndim == 0 else out


def arc_length(chord, theta):
    """Length of the circular arc over ``chord`` with opening angle ``theta``."""
    _check_angle(theta)
    out = np.asarray(chord, dtype=float) * _angle_over_sin_half(theta) / 2.0
    return float(out) if np.ndim(out) == 0 else out


def sagitta(chord, theta):
    """Maximal distance between the arc and its chord (the bulge amplitude)."""
    out = np.asarray(chord, dtype=float) / 2.0 * np.abs(np.tan(np.asarray(theta, dtype=float) / 4.0))
    return float(out) if np.ndim(out) == 0 else out


def arc_points(x0, y0, x1, y1, sweep, t):
    """Points on many arcs at once.

    Endpoint coordinates and ``sweep`` broadcast against each other with
    shape ``S``; ``t`` is a 1-d array of parameters.  Returns ``(x, y)`` of
    shape ``S + t.shape``.  Positive sweep bulges right of ``p0 -> p1``.
    """
    x0, y0, x1, y1, sweep = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x0, y0, x1, y1, sweep)))
    t = np.asarray(t, dtype=float)
    ex = (...,) + (None,) * t.ndim
    dx, dy = x1 - x0, y1 - y0
    L = np.hypot(dx, dy)
    Ls = np.where(L > 0, L, 1.0)
    ux, uy = dx / Ls, dy / Ls
    nx, ny = -uy, ux
    mx, my = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    D = sweep[ex]
    psi = (t - 0.5) * D
    # below 1e-7 the first-order sagitta profile is exact to round-off
    flat = np.abs(D) < 1e-7
    Dsafe = np.where(flat, 1.0, D)
    scale = L[ex] / (2.0 * np.sin(Dsafe / 2.0))
    s = np.where(flat, L[ex] * (t - 0.5), scale * np.sin(psi))
    h_flat = L[ex] * D * t * (1.0 - t) / 2.0
    h = np.where(flat, h_flat, scale * 2.0 * np.sin((D / 2 + psi) / 2.0) * np.sin((D / 2 - psi) / 2.0))
    x = mx[ex] + ux[ex] * s - nx[ex] * h
    y = my[ex] + uy[ex] * s - ny[ex] * h
    return x, y


# ---------------------------------------------------------------------------
# boundary curves
# ---------------------------------------------------------------------------

def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _as_point(p):
    p = np.asarray(p, dtype=float).reshape(2)
    return p


class BoundaryCurve:
    """Parametric boundary piece ``t -> (x(t), y(t))`` on ``[0, 1]``."""

    kind = "abstract"

    @property
    def start(self) -> np.ndarray:
        return np.array(self.point(0.0), dtype=float)

    @property
    def end(self) -> np.ndarray:
        return np.array(self.point(1.0), dtype=float)

    def point(self, t):
        raise NotImplementedError

    def derivatives(self, t):
        """First, second and third derivatives with respect to ``t``."""
        raise NotImplementedError

    def line_integral(self, t0=0.0, t1=1.0):
        """``1/2 * int(x dy - y dx)`` along the curve from ``t0`` to ``t1``."""
        raise NotImplementedError

    def split(self, t):
        raise NotImplementedError

    def reversed(self):
        raise NotImplementedError

    def transformed(self, matrix, offset):
        raise NotImplementedError

    def coefficients(self) -> dict:
        raise NotImplementedError

    # graph helpers -------------------------------------------------------
    @property
    def x_range(self):
        x0, x1 = float(self.start[0]), float(self.end[0])
        return (min(x0, x1), max(x0, x1))

    def t_at_x(self, x):
        """Parameter where the curve reaches abscissa ``x`` (curve must be x-monotone)."""
        x = np.asarray(x, dtype=float)
        lo, hi = self.x_range
        tol = 1e-12 * max(1.0, abs(hi - lo))
        if np.any(x < lo - tol) or np.any(x > hi + tol):
            raise DomainError(f"abscissa outside the curve interval [{lo:.6g}, {hi:.6g}]")
        x0, x1 = float(self.start[0]), float(self.end[0])
        if x1 == x0:
            raise GeometryError("curve is not a graph over x")
        t = (x - x0) / (x1 - x0)
        for _ in range(50):
            xt = self.point(t)[0]
            dx = self.derivatives(t)[0][0]
            if np.any(dx * np.sign(x1 - x0) <= 0):
                raise GeometryError("curve is not a graph over x")
            step = (xt - x) / dx
            t = t - step
            if np.all(np.abs(step) < 1e-15):
                break
        return t

    def y_at_x(self, x):
        return self.point(self.t_at_x(x))[1]

    def sample(self, n=101):
        t = np.linspace(0.0, 1.0, n)
        return np.stack(self.point(t), axis=-1)


class Segment(BoundaryCurve):
    kind = "straight"

    def __init__(self, p0, p1):
        self.p0 = _as_point(p0)
        self.p1 = _as_point(p1)

    def __repr__(self):
        return f"Segment({self.p0.tolist()}, {self.p1.tolist()})"

    def point(self, t):
        t = np.asarray(t, dtype=float)
        d = self.p1 - self.p0
        return (self.p0[0] + t * d[0], self.p0[1] + t * d[1])

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        d = self.p1 - self.p0
        one = np.ones_like(t)
        zero = np.zeros_like(t)
        return ((d[0] * one, d[1] * one), (zero, zero), (zero, zero))

    def line_integral(self, t0=0.0, t1=1.0):
        a = self.point(t0)
        b = self.point(t1)
        return 0.5 * (a[0] * b[1] - b[0] * a[1])

    def split(self, t):
        m = np.array(self.point(t), dtype=float)
        return Segment(self.p0, m), Segment(m, self.p1)

    def reversed(self):
        return Segment(self.p1, self.p0)

    def transformed(self, matrix, offset):
        return Segment(matrix @ self.p0 + offset, matrix @ self.p1 + offset)

    def coefficients(self):
        return {"p0": self.p0.tolist(), "p1": self.p1.tolist()}


class QuadraticCurve(BoundaryCurve):
    """Parabolic arc given as a quadratic Bezier curve (closed under affine maps)."""

    kind = "parabolic"

    def __init__(self, p0, control, p1):
        self.p0 = _as_point(p0)
        self.control = _as_point(control)
        self.p1 = _as_point(p1)
        self._a = self.p0
        self._b = 2.0 * (self.control - self.p0)
        self._c = self.p0 - 2.0 * self.control + self.p1

    @classmethod
    def graph(cls, c2, c1, c0, x0=0.0, x1=1.0):
        """Graph of ``y = c2 x^2 + c1 x + c0`` over ``[x0, x1]``."""
        f = lambda x: c2 * x * x + c1 * x + c0
        slope0 = 2.0 * c2 * x0 + c1
        h = x1 - x0
        return cls((x0, f(x0)), (x0 + h / 2.0, f(x0) + slope0 * h / 2.0), (x1, f(x1)))

    def __repr__(self):
        return f"QuadraticCurve({self.p0.tolist()}, {self.control.tolist()}, {self.p1.tolist()})"

    def point(self, t):
        t = np.asarray(t, dtype=float)
        a, b, c = self._a, self._b, self._c
        return (a[0] + t * (b[0] + t * c[0]), a[1] + t * (b[1] + t * c[1]))

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        b, c = self._b, self._c
        zero = np.zeros_like(t)
        one = np.ones_like(t)
        return (
            (b[0] + 2 * c[0] * t, b[1] + 2 * c[1] * t),
            (2 * c[0] * one, 2 * c[1] * one),
            (zero, zero),
        )

    def line_integral(self, t0=0.0, t1=1.0):
        k0 = _cross(self._a, self._b)
        k1 = _cross(self._a, self._c)
        k2 = _cross(self._b, self._c)
        prim = lambda t: k0 * t + k1 * t * t + k2 * t**3 / 3.0
        t0 = np.asarray(t0, dtype=float)
        t1 = np.asarray(t1, dtype=float)
        return 0.5 * (prim(t1) - prim(t0))

    def t_at_x(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.x_range
        tol = 1e-12 * max(1.0, hi - lo)
        if np.any(x < lo - tol) or np.any(x > hi + tol):
            raise DomainError(f"abscissa outside the curve interval [{lo:.6g}, {hi:.6g}]")
        a, b, c = self._a[0], self._b[0], self._c[0]
        d = x - a
        disc = b * b + 4.0 * c * d
        if np.any(disc < 0) or b == 0:
            raise GeometryError("curve is not a graph over x")
        return 2.0 * d / (b + math.copysign(1.0, b) * np.sqrt(disc))

    def split(self, t):
        m = np.array(self.point(t), dtype=float)
        c_left = self.p0 + t * (self.control - self.p0)
        c_right = self.control + t * (self.p1 - self.control)
        return QuadraticCurve(self.p0, c_left, m), QuadraticCurve(m, c_right, self.p1)

    def reversed(self):
        return QuadraticCurve(self.p1, self.control, self.p0)

    def transformed(self, matrix, offset):
        return QuadraticCurve(matrix @ self.p0 + offset, matrix @ self.control + offset, matrix @ self.p1 + offset)

    def coefficients(self):
        return {"p0": self.p0.tolist(), "control": self.control.tolist(), "p1": self.p1.tolist()}


class CircularArc(BoundaryCurve):
    """Circular arc from ``p0`` to ``p1`` with signed opening angle ``sweep``.

    ``sweep > 0`` bulges to the right of the direction ``p0 -> p1``.  The
    arc is evaluated in its chord frame, which stays well conditioned as the
    sweep goes to zero (the radius is never formed explicitly).
    """

    kind = "circular"

    def __init__(self, p0, p1, sweep):
        self.p0 = _as_point(p0)
        self.p1 = _as_point(p1)
        self.sweep = float(sweep)
        _check_angle(self.sweep)
        d = self.p1 - self.p0
        self.chord = float(np.hypot(d[0], d[1]))
        if self.chord == 0:
            raise GeometryError("degenerate arc: coincident endpoints")
        self._d = d / self.chord
        self._n = np.array([-self._d[1], self._d[0]])
        self._mid = (self.p0 + self.p1) / 2.0
        # L / (2 sin(sweep/2)) multiplied by sweep, finite at sweep = 0
        self._k = self.chord * float(_angle_over_sin_half(self.sweep)) / 2.0

    def __repr__(self):
        return f"CircularArc({self.p0.tolist()}, {self.p1.tolist()}, sweep={self.sweep!r})"

    @property
    def radius(self):
        return arc_radius(self.chord, self.sweep)

    @property
    def center(self):
        if self.sweep == 0:
            return None
        off = self.chord / 2.0 / math.tan(self.sweep / 2.0)
        return self._mid + self._n * off

    def _local(self, t):
        t = np.asarray(t, dtype=float)
        D = self.sweep
        if abs(D) < 1e-7:
            return self.chord * (t - 0.5), self.chord * D * t * (1.0 - t) / 2.0
        psi = (t - 0.5) * D
        scale = self._k / D  # = L / (2 sin(D/2))
        s = scale * np.sin(psi)
        h = scale * 2.0 * np.sin((D / 2 + psi) / 2.0) * np.sin((D / 2 - psi) / 2.0)
        return s, h

    def point(self, t):
        s, h = self._local(t)
        x = self._mid[0] + self._d[0] * s - self._n[0] * h
        y = self._mid[1] + self._d[1] * s - self._n[1] * h
        return (x, y)

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        D = self.sweep
        psi = (t - 0.5) * D
        k = self._k  # scale * D
        ds = [k * np.cos(psi), -k * D * np.sin(psi), -k * D * D * np.cos(psi)]
        dh = [-k * np.sin(psi), -k * D * np.cos(psi), k * D * D * np.sin(psi)]
        out = []
        for a, b in zip(ds, dh):
            out.append((self._d[0] * a - self._n[0] * b, self._d[1] * a - self._n[1] * b))
        return tuple(out)

    def line_integral(self, t0=0.0, t1=1.0):
        t0 = np.asarray(t0, dtype=float)
        t1 = np.asarray(t1, dtype=float)
        a = self.point(t0)
        b = self.point(t1)
        chord = np.hypot(b[0] - a[0], b[1] - a[1])
        return 0.5 * (a[0] * b[1] - b[0] * a[1]) + cap_area(chord, (t1 - t0) * self.sweep)

    def split(self, t):
        m = np.array(self.point(t), dtype=float)
        return CircularArc(self.p0, m, t * self.sweep), CircularArc(m, self.p1, (1 - t) * self.sweep)

    def reversed(self):
        return CircularArc(self.p1, self.p0, -self.sweep)

    def transformed(self, matrix, offset):
        sign = 1.0 if np.linalg.det(matrix) > 0 else -1.0
        return CircularArc(matrix @ self.p0 + offset, matrix @ self.p1 + offset, sign * self.sweep)

    def coefficients(self):
        c = self.center
        return {
            "p0": self.p0.tolist(),
            "p1": self.p1.tolist(),
            "sweep": self.sweep,
            "radius": float(self.radius),
            "center": None if c is None else c.tolist(),
        }


def curve_from_dict(data: dict) -> BoundaryCurve:
    kind = data["kind"]
    if kind == "straight":
        return Segment(data["p0"], data["p1"])
    if kind == "parabolic":
        return QuadraticCurve(data["p0"], data["control"], data["p1"])
    if kind == "circular":
        return CircularArc(data["p0"], data["p1"], data["sweep"])
    raise ValueError(f"unknown curve kind {kind!r}")


def curve_to_dict(curve: BoundaryCurve) -> dict:
    return {"kind": curve.kind, **curve.coefficients()}


# ---------------------------------------------------------------------------
# the parametrised family
# ---------------------------------------------------------------------------

def _sigma(sigma) -> DomainParams:
    if isinstance(sigma, DomainParams):
        return sigma
    if sigma is None:
        return DomainParams()
    if isinstance(sigma, dict):
        return DomainParams(**sigma)
    return DomainParams.from_array(sigma)


def top_height(sigma, x):
    """Parabolic top curve ``eps_t x^2 + (a2 - a1 - eps_t) x + a1 + height``."""
    s = _sigma(sigma)
    x = np.asarray(x, dtype=float)
    return s.eps_t * x * x + (s.a2 - s.a1 - s.eps_t) * x + s.a1 + s.height


def bottom_height(sigma, x):
    """Parabolic bottom curve ``eps_b x^2 + (a3 - eps_b) x``."""
    s = _sigma(sigma)
    x = np.asarray(x, dtype=float)
    return s.eps_b * x * x + (s.a3 - s.eps_b) * x


def parabolic_top(sigma) -> QuadraticCurve:
    s = _sigma(sigma)
    return QuadraticCurve.graph(s.eps_t, s.a2 - s.a1 - s.eps_t, s.a1 + s.height)


def parabolic_bottom(sigma) -> QuadraticCurve:
    s = _sigma(sigma)
    return QuadraticCurve.graph(s.eps_b, s.a3 - s.eps_b, 0.0)


def circular_top(a1, a2, theta_t, height=0.5) -> BoundaryCurve:
    """Circular top through ``(0, height+a1)`` and ``(1, height+a2)``; ``theta_t > 0`` bulges outwards."""
    p0, p1 = (0.0, height + a1), (1.0, height + a2)
    if theta_t == 0:
        return Segment(p0, p1)
    # traversed left to right, an outward (upward) bulge lies to the left
    return CircularArc(p0, p1, -theta_t)


def circular_bottom(a3, theta_b) -> BoundaryCurve:
    """Circular bottom through ``(0, 0)`` and ``(1, a3)``; ``theta_b > 0`` bulges outwards."""
    p0, p1 = (0.0, 0.0), (1.0, a3)
    if theta_b == 0:
        return Segment(p0, p1)
    return CircularArc(p0, p1, theta_b)


def curve_eval(curve: BoundaryCurve, x):
    """Height of a graph-type boundary curve at abscissa ``x``."""
    out = curve.y_at_x(x)
    return float(out) if np.ndim(out) == 0 else out


def chord_length(sigma, cut) -> float:
    """Distance between the cut endpoints on the parabolic bottom and top curves."""
    s = _sigma(sigma)
    c = cut if isinstance(cut, CutParams) else CutParams.from_array(cut)
    for v, name in ((c.q, "q"), (c.p, "p")):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name}={v} outside [0, 1]")
    dy = top_height(s, c.p) - bottom_height(s, c.q)
    return float(math.hypot(c.p - c.q, dy))


def circle_through(p0, p1, theta) -> ArcGeometry:
    """Circle through ``p0`` and ``p1`` whose arc between them subtends ``theta``.

    Positive ``theta`` puts the arc on the right of ``p0 -> p1`` (towards
    increasing x for an upward chord), so the centre lies on the left.
    """
    p0 = _as_point(p0)
    p1 = _as_point(p1)
    d = p1 - p0
    chord = float(np.hypot(*d))
    if chord == 0:
        raise GeometryError("degenerate chord: coincident points")
    if theta == 0 or abs(theta) > math.pi:
        raise DomainError("circle_through requires 0 < |theta| <= pi")
    radius = arc_radius(chord, theta)
    n = np.array([-d[1], d[0]]) / chord
    center = (p0 + p1) / 2.0 + n * (chord / 2.0 / math.tan(theta / 2.0))
    return ArcGeometry(float(radius), (float(center[0]), float(center[1])), chord, float(theta))


def opening_angle_of(arc: ArcGeometry, p0, p1) -> float:
    """Signed opening angle of the minor arc from ``p0`` to ``p1`` around the arc centre.

    The centre of a positive-theta arc lies left of ``p0 -> p1``, so the arc
    on the right is travelled counter-clockwise and the angle comes out positive.
    """
    c = np.asarray(arc.center)
    u = _as_point(p0) - c
    v = _as_point(p1) - c
    return math.atan2(_cross(u, v), float(np.dot(u, v)))


def stokes_area(loop: Sequence[BoundaryCurve], tol: float = 1e-9) -> float:
    """Area enclosed by a closed counter-clockwise chain of boundary curves."""
    loop = list(loop)
    if not loop:
        raise GeometryError("empty loop")
    for i, cur in enumerate(loop):
        nxt = loop[(i + 1) % len(loop)]
        gap = float(np.hypot(*(np.asarray(cur.end) - np.asarray(nxt.start))))
        if gap > tol:
            raise GeometryError(f"loop is not closed between pieces {i} and {(i + 1) % len(loop)} (gap {gap:.3g})")
    area = float(sum(float(c.line_integral()) for c in loop))
    if area < 0:
        raise OrientationError(f"loop is clockwise (signed area {area:.6g})")
    return area


def polygon_area(points) -> float:
    """Signed shoelace area of a closed polygon."""
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def parabolic_trapezoid_loop(sigma) -> list:
    """Counter-clockwise boundary of the parabolic trapezoid (wings excluded)."""
    s = _sigma(sigma)
    bottom = parabolic_bottom(s)
    top = parabolic_top(s)
    return [
        bottom,
        Segment(bottom.end, top.end),
        top.reversed(),
        Segment(top.start, bottom.start),
    ]
