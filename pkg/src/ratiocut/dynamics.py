"""Iterated ratio cuts: cut, keep one side, re-fit, renormalise, repeat.

A :class:`CurvilinearQuad` stores its four sides as one counter-clockwise
loop ``[bottom, right, top reversed, left reversed]``.  In the normalised
frame the bottom-left corner sits at the origin, the left and right sides
point (on average) straight up and the bottom-right corner has ``x = 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, GeometryError, OutOfRegimeError
from .functional import Domain, ParabolicModel
from .geometry import (
    DEFAULT_GATE,
    CircularArc,
    CutParams,
    DomainParams,
    QuadraticCurve,
    Segment,
    _sigma,
    curve_from_dict,
    curve_to_dict,
    parabolic_trapezoid_loop,
    sagitta,
)
from .optimize import OptimizeReport, optimize_cut
from .perturbation.circular import curvature_from_arc

ORIGINAL = "original"
CUT_ARC = "cut-arc"

IQ_SAMPLES = 101
FIT_SAMPLES = 33
#: default bound on I(Q) accepted by fit_sigma
IQ_GATE = 1.0
#: relative tolerance under which two cut values count as a tie
TIE_TOL = 1e-9
POLICIES = ("left", "right", "alternate", "away-from-original")

_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)


def curve_length(curve) -> float:
    t = 0.5 * (_GL_X + 1.0)
    d1 = curve.derivatives(t)[0]
    return float(0.5 * np.dot(_GL_W, np.hypot(d1[0], d1[1])))


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / float(np.hypot(v[0], v[1]))


def _tangent(curve, t):
    d = curve.derivatives(np.asarray(float(t)))[0]
    return _unit((float(d[0]), float(d[1])))


class CurvilinearQuad:
    """Closed loop of four boundary curves with per-side provenance tags."""

    def __init__(self, sides, tags=None, tol=1e-9):
        self.sides = list(sides)
        if len(self.sides) != 4:
            raise GeometryError("a curvilinear quadrilateral has exactly four sides")
        self.tags = list(tags) if tags is not None else [ORIGINAL] * 4
        for i in range(4):
            gap = float(np.hypot(*(self.sides[i].end - self.sides[(i + 1) % 4].start)))
            if gap > tol:
                raise GeometryError(f"sides {i} and {(i + 1) % 4} do not meet (gap {gap:.3g})")
        self.angles = self._corner_angles()

    @classmethod
    def from_sigma(cls, sigma) -> "CurvilinearQuad":
        s = _sigma(sigma)
        if s.A_WL != 0 or s.A_WR != 0:
            raise DomainError("wing areas have no boundary geometry; use zero wings")
        return cls(parabolic_trapezoid_loop(s))

    @classmethod
    def from_domain_sides(cls, bottom, right, top, left, tags=None) -> "CurvilinearQuad":
        return cls([bottom, right, top.reversed(), left.reversed()], tags)

    @classmethod
    def rectangle(cls, width=1.0, height=0.5, origin=(0.0, 0.0)) -> "CurvilinearQuad":
        x0, y0 = origin
        c = [(x0, y0), (x0 + width, y0), (x0 + width, y0 + height), (x0, y0 + height)]
        return cls([Segment(c[i], c[(i + 1) % 4]) for i in range(4)])

    @classmethod
    def polygon(cls, corners) -> "CurvilinearQuad":
        c = [tuple(map(float, p)) for p in corners]
        return cls([Segment(c[i], c[(i + 1) % 4]) for i in range(4)])

    # ------------------------------------------------------------------
    @property
    def corners(self) -> np.ndarray:
        return np.array([s.start for s in self.sides])

    def _corner_angles(self) -> np.ndarray:
        out = []
        for i in range(4):
            t_in = _tangent(self.sides[i - 1], 1.0)
            t_out = _tangent(self.sides[i], 0.0)
            turn = math.atan2(t_in[0] * t_out[1] - t_in[1] * t_out[0], float(np.dot(t_in, t_out)))
            out.append(math.pi - turn)
        return np.array(out)

    @property
    def bottom(self):
        return self.sides[0]

    @property
    def right(self):
        return self.sides[1]

    @property
    def top(self):
        return self.sides[2].reversed()

    @property
    def left(self):
        return self.sides[3].reversed()

    @property
    def area(self) -> float:
        return float(sum(float(s.line_integral()) for s in self.sides))

    def side_lengths(self) -> np.ndarray:
        return np.array([curve_length(s) for s in self.sides])

    def chord_lengths(self) -> np.ndarray:
        return np.array([float(np.hypot(*(s.end - s.start))) for s in self.sides])

    @property
    def aspect(self) -> float:
        c = self.chord_lengths()
        a, b = c[0] + c[2], c[1] + c[3]
        return float(max(a, b) / min(a, b))

    def original_fraction(self) -> float:
        L = self.side_lengths()
        orig = sum(l for l, t in zip(L, self.tags) if t == ORIGINAL)
        return float(orig / L.sum())

    def original_corners(self) -> int:
        """Corners where two sides of the initial boundary meet."""
        return sum(1 for i in range(4) if self.tags[i - 1] == ORIGINAL and self.tags[i] == ORIGINAL)

    def relabeled(self, k: int) -> "CurvilinearQuad":
        k %= 4
        return CurvilinearQuad(self.sides[k:] + self.sides[:k], self.tags[k:] + self.tags[:k])

    def transformed(self, matrix, offset) -> "CurvilinearQuad":
        M = np.asarray(matrix, dtype=float)
        o = np.asarray(offset, dtype=float)
        if np.linalg.det(M) <= 0:
            raise GeometryError("only orientation-preserving maps keep the loop counter-clockwise")
        return CurvilinearQuad([s.transformed(M, o) for s in self.sides], self.tags)

    def domain(self, normalized=True) -> Domain:
        return Domain(self.bottom, self.right, self.top, self.left, normalized=normalized)

    def to_dict(self) -> dict:
        return {"sides": [curve_to_dict(s) for s in self.sides], "tags": list(self.tags)}

    @classmethod
    def from_dict(cls, data) -> "CurvilinearQuad":
        return cls([curve_from_dict(d) for d in data["sides"]], data.get("tags"))

    def __repr__(self):
        return f"CurvilinearQuad(corners={self.corners.round(6).tolist()}, tags={self.tags})"


# ---------------------------------------------------------------------------
# rectangularity functional
# ---------------------------------------------------------------------------

def side_graph_derivatives(curve, samples=IQ_SAMPLES):
    """``(g', g'', g''')`` of the side written as a graph over its chord."""
    p0, p1 = curve.start, curve.end
    d = _unit(p1 - p0)
    n = np.array([-d[1], d[0]])
    t = np.linspace(0.0, 1.0, samples)
    (x1, y1), (x2, y2), (x3, y3) = curve.derivatives(t)
    X1, Y1 = d[0] * x1 + d[1] * y1, n[0] * x1 + n[1] * y1
    X2, Y2 = d[0] * x2 + d[1] * y2, n[0] * x2 + n[1] * y2
    X3, Y3 = d[0] * x3 + d[1] * y3, n[0] * x3 + n[1] * y3
    if np.any(X1 <= 0):
        raise GeometryError("side is not a graph over its chord")
    N = Y2 * X1 - Y1 * X2
    dN = Y3 * X1 - Y1 * X3
    g1 = Y1 / X1
    g2 = N / X1**3
    g3 = (dN * X1 - 3.0 * N * X2) / X1**5
    return g1, g2, g3


def iq_metric(Q: CurvilinearQuad, samples=IQ_SAMPLES) -> float:
    """Sum of corner-angle deviations from a right angle plus the largest
    ``sup(|g'| + |g''| + |g'''|)`` over the sides."""
    angle_term = float(np.sum(np.abs(Q.angles - math.pi / 2.0)))
    sup = 0.0
    for side in Q.sides:
        g1, g2, g3 = side_graph_derivatives(side, samples)
        sup = max(sup, float(np.max(np.abs(g1) + np.abs(g2) + np.abs(g3))))
    return angle_term + sup


# ---------------------------------------------------------------------------
# normalisation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Similarity:
    """``x -> matrix @ x + offset`` applied after relabelling sides by ``shift``."""

    matrix: tuple
    offset: tuple
    shift: int = 0

    def apply(self, pts):
        pts = np.asarray(pts, dtype=float)
        return pts @ np.asarray(self.matrix).T + np.asarray(self.offset)

    @property
    def scale(self) -> float:
        return float(math.sqrt(abs(np.linalg.det(np.asarray(self.matrix)))))

    def to_dict(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "offset": list(self.offset), "shift": self.shift}


def _up_rotation(Q: CurvilinearQuad) -> np.ndarray:
    u = _unit(Q.sides[1].end - Q.sides[1].start) + _unit(Q.sides[3].start - Q.sides[3].end)
    u = _unit(u)
    return np.array([[u[1], -u[0]], [u[0], u[1]]])


def normalize(Q: CurvilinearQuad, shift: int | None = None):
    """Relabel, rotate, translate and scale ``Q`` into the standard frame.

    The longer pair of opposite sides becomes bottom/top; of the two
    labellings with that property the one needing the smaller rotation is
    kept.  ``shift`` forces a particular relabelling.  Returns ``(Q', T)``.
    """
    if shift is None:
        c = Q.chord_lengths()
        base = 0 if c[0] + c[2] >= (c[1] + c[3]) * (1.0 - TIE_TOL) else 1
        options = [base, base + 2]
    else:
        options = [shift % 4]
    best = None
    for k in options:
        R = _up_rotation(Q.relabeled(k))
        angle = abs(math.atan2(R[1, 0], R[0, 0]))
        if best is None or angle < best[0] - 1e-12:
            best = (angle, k, R)
    _, k, R = best
    P = Q.relabeled(k)
    bl = R @ P.sides[0].start
    br = R @ P.sides[0].end
    width = float(br[0] - bl[0])
    if width <= 0:
        raise GeometryError("bottom side does not run left to right after rotation")
    M = R / width
    o = -M @ P.sides[0].start
    out = P.transformed(M, o)
    return out, Similarity(tuple(map(tuple, M.tolist())), tuple(o.tolist()), k)


# ---------------------------------------------------------------------------
# parameter fit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    sigma: DomainParams
    residual: float
    iq: float


def _quadratic_eps(curve, y0, y1, samples=FIT_SAMPLES):
    """Least-squares ``eps`` for ``y = eps x^2 + (y1 - y0 - eps) x + y0`` on ``[0, 1]``."""
    t = np.linspace(0.0, 1.0, samples)
    x, y = curve.point(t)
    basis = x * x - x
    r = y - ((y1 - y0) * x + y0)
    den = float(np.dot(basis, basis))
    return float(np.dot(basis, r) / den) if den > 0 else 0.0


def _side_eps(curve, y0, y1, which):
    if isinstance(curve, Segment):
        return 0.0
    if isinstance(curve, CircularArc):
        slope = y1 - y0
        if which == "top":
            return -(1.0 + slope**2) * (-curve.sweep) / 2.0
        return (1.0 + slope**2) * curve.sweep / 2.0
    return _quadratic_eps(curve, y0, y1)


def fit_sigma(Q: CurvilinearQuad, gate: float | None = DEFAULT_GATE, iq_gate: float | None = IQ_GATE, window=0.2):
    """Parabolic-trapezoid parameters of a normalised quadrilateral.

    Corner offsets come from the corners, curvatures from matched cap
    areas (circular sides) or a least-squares parabola, and the wing areas
    from the area discrepancy on either side of ``x = 1/2``.  Returns
    :class:`FitResult` with the sup curve error on ``[1/2 - window, 1/2 + window]``.
    """
    iq = iq_metric(Q)
    if iq_gate is not None and iq > iq_gate:
        raise OutOfRegimeError(f"I(Q) = {iq:.4g} exceeds the fit gate {iq_gate}")
    bl, br = Q.bottom.start, Q.bottom.end
    tl, tr = Q.top.start, Q.top.end
    if abs(bl[0]) > 1e-9 or abs(bl[1]) > 1e-9 or abs(br[0] - 1.0) > 1e-9:
        raise DomainError("quadrilateral is not in the normalised frame")
    side_h = 0.5 * ((tl[1] - bl[1]) + (tr[1] - br[1]))
    height = 0.5 if abs(side_h - 0.5) <= (gate if gate is not None else DEFAULT_GATE) else float(side_h)
    a1 = float(tl[1] - height)
    a2 = float(tr[1] - height)
    a3 = float(br[1])
    eps_b = _side_eps(Q.bottom, 0.0, a3, "bottom")
    eps_t = _side_eps(Q.top, a1 + height, a2 + height, "top")
    bare = DomainParams(a1, a2, a3, eps_t, eps_b, 0.0, 0.0, height=height)
    model = ParabolicModel(bare, gate=None)
    exact = Q.domain(normalized=False)
    try:
        left_q = float(exact.evaluate(0.5, 0.5, 0.0, check=False)["area_left"])
    except (DomainError, GeometryError) as exc:
        raise OutOfRegimeError(f"quadrilateral cannot be fitted: {exc}") from exc
    left_m = float(model.evaluate(0.5, 0.5, 0.0, check=False)["area_left"])
    A_WL = left_q - left_m
    A_WR = (exact.total_area - left_q) - (model.total_area - left_m)
    sigma = bare.with_(A_WL=float(A_WL), A_WR=float(A_WR))
    if gate is not None:
        sigma.check_gate(gate)
    x = np.linspace(0.5 - window, 0.5 + window, 41)
    md = model.domain()
    residual = max(
        float(np.max(np.abs(Q.top.y_at_x(x) - md.top.y_at_x(x)))),
        float(np.max(np.abs(Q.bottom.y_at_x(x) - md.bottom.y_at_x(x)))),
    )
    return FitResult(sigma, residual, iq)


# ---------------------------------------------------------------------------
# one cut
# ---------------------------------------------------------------------------

@dataclass
class CutResult:
    quad: CurvilinearQuad  # the (normalised) domain that was cut
    fit: FitResult
    report: OptimizeReport
    left: CurvilinearQuad
    right: CurvilinearQuad
    shift: int = 0
    tie: bool = False
    alternatives: list = field(default_factory=list)

    @property
    def theta(self) -> float:
        return self.report.cut.theta

    @property
    def bulge(self) -> float:
        """Sagitta of the cut arc."""
        return float(sagitta(self.report.breakdown.chord, self.theta))

    @property
    def bulge_ratio(self) -> float:
        return self.bulge / self.report.breakdown.chord


def _cut_oriented(Q: CurvilinearQuad, gate, iq_gate):
    fit = fit_sigma(Q, gate=gate, iq_gate=iq_gate)
    dom = Q.domain(normalized=True)
    seed = None
    if fit.sigma.height == 0.5:
        try:
            from .perturbation.expansion import predict_cut

            seed = predict_cut(fit.sigma, order="full", gate=None)
            if not np.isfinite(dom.values(seed.as_array(), check=True)[0]):
                seed = None
        except Exception:
            seed = None
    report = optimize_cut(dom, seed=seed)
    left_loop, right_loop = dom.split(report.cut)
    tags = Q.tags
    left = CurvilinearQuad(left_loop, [tags[0], CUT_ARC, tags[2], tags[3]])
    right = CurvilinearQuad(right_loop, [tags[0], tags[1], tags[2], CUT_ARC])
    return fit, report, left, right


def cut_domain(Q: CurvilinearQuad, gate: float | None = DEFAULT_GATE, iq_gate: float | None = IQ_GATE, square_tol=0.1):
    """Optimal cut of ``Q`` and its two children (in ``Q``'s normalised frame).

    When ``Q`` is close to square both labellings are tried and the lower
    ratio cut wins; equal values (to ``TIE_TOL``) set ``tie``.
    """
    Qn, T = normalize(Q)
    shifts = [0, 1] if Qn.aspect < 1.0 + square_tol else [0]
    results = []
    errors = []
    for k in shifts:
        Qk, _ = normalize(Qn, shift=k) if k else (Qn, None)
        try:
            results.append((k, Qk) + _cut_oriented(Qk, gate, iq_gate))
        except (ConvergenceError, GeometryError, DomainError) as exc:
            errors.append(exc)
    if not results:
        raise errors[0]
    results.sort(key=lambda r: (r[3].breakdown.value, r[0]))
    k, Qk, fit, report, left, right = results[0]
    tie = len(results) > 1 and abs(results[1][3].breakdown.value - report.breakdown.value) <= TIE_TOL * report.breakdown.value
    alternatives = [{"shift": r[0], "cut": r[3].cut, "value": r[3].breakdown.value} for r in results]
    return CutResult(Qk, fit, report, left, right, shift=k, tie=tie, alternatives=alternatives)


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

@dataclass
class StepRecord:
    step: int
    quad: CurvilinearQuad
    sigma: DomainParams
    cut: CutParams
    rc_value: float
    iq: float
    aspect: float
    theta: float
    bulge: float
    bulge_ratio: float
    side: str
    transform: Similarity
    tie: bool = False

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "sigma": [float(v) for v in self.sigma.as_array()],
            "height": self.sigma.height,
            "cut": {"q": self.cut.q, "p": self.cut.p, "theta": self.cut.theta},
            "rc_value": self.rc_value,
            "iq": self.iq,
            "aspect": self.aspect,
            "theta": self.theta,
            "bulge": self.bulge,
            "bulge_ratio": self.bulge_ratio,
            "side": self.side,
            "tie": self.tie,
            "transform": self.transform.to_dict(),
            "domain": self.quad.to_dict(),
        }


@dataclass
class Trajectory:
    records: list = field(default_factory=list)
    stopped: str | None = None

    def __len__(self):
        return len(self.records)

    def column(self, name) -> list:
        return [getattr(r, name) for r in self.records]

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.to_dict(), sort_keys=True) for r in self.records]
        if self.stopped:
            lines.append(json.dumps({"stopped": self.stopped}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_jsonl())


def _choose(policy, step, res: CutResult):
    if policy == "left":
        return "left"
    if policy == "right":
        return "right"
    if policy == "alternate":
        return "left" if step % 2 == 0 else "right"
    # fewer surviving initial corners first, then less initial perimeter
    kl = (res.left.original_corners(), res.left.original_fraction())
    kr = (res.right.original_corners(), res.right.original_fraction())
    if kr[0] != kl[0]:
        return "right" if kr[0] < kl[0] else "left"
    return "right" if kr[1] < kl[1] - 1e-12 else "left"


def iterate(Q0: CurvilinearQuad, steps: int, side_policy: str = "away-from-original", gate=DEFAULT_GATE, iq_gate=IQ_GATE) -> Trajectory:
    """Repeatedly cut and keep one child according to ``side_policy``.

    Stops early (``Trajectory.stopped`` set) when a step leaves the fit gate
    or the optimiser fails.
    """
    if side_policy not in POLICIES:
        raise ValueError(f"side policy must be one of {POLICIES}")
    traj = Trajectory()
    Q = Q0
    for step in range(steps):
        try:
            Qn, T = normalize(Q)
            res = cut_domain(Qn, gate=gate, iq_gate=iq_gate)
        except (OutOfRegimeError, DomainError, GeometryError, ConvergenceError) as exc:
            traj.stopped = f"step {step}: {type(exc).__name__}: {exc}"
            break
        side = _choose(side_policy, step, res)
        traj.records.append(
            StepRecord(
                step=step,
                quad=res.quad,
                sigma=res.fit.sigma,
                cut=res.report.cut,
                rc_value=res.report.breakdown.value,
                iq=res.fit.iq,
                aspect=res.quad.aspect,
                theta=res.theta,
                bulge=res.bulge,
                bulge_ratio=res.bulge_ratio,
                side=side,
                transform=T,
                tie=res.tie,
            )
        )
        Q = res.left if side == "left" else res.right
    return traj


def isosceles_right_triangle() -> CurvilinearQuad:
    """Right triangle with the fourth corner at the hypotenuse midpoint."""
    return CurvilinearQuad.polygon([(0.0, 0.0), (1.0, 0.0), (0.5, 0.5), (0.0, 1.0)])
