"""Exact cuts of rectangles and the isoperimetric cap bound.

The brute-force search here is an independent oracle: it enumerates
straight and circular cuts between any two boundary points of an ``a x b``
rectangle and evaluates the scale-invariant ratio cut

    RC = length * |Omega| / (|S| * |Omega \\ S|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import arc_length, arc_points, cap_area

ADJACENT_FACTOR = 4.6


@dataclass(frozen=True)
class RectangleCut:
    value: float
    orientation: str  # "vertical" (x = position) or "horizontal" (y = position)
    position: float
    degenerate: bool = False


def rectangle_ratio_cut(a: float, b: float) -> RectangleCut:
    """Optimal cut of the ``a x b`` rectangle: the midline across the long side."""
    if a <= 0 or b <= 0:
        raise DomainError("rectangle sides must be positive")
    if a >= b:
        return RectangleCut(4.0 / a, "vertical", a / 2.0, degenerate=(a == b))
    return RectangleCut(4.0 / b, "horizontal", b / 2.0)


def lemma2_area_bound(chord: float, perimeter_excess: float, eps0: float = 0.01, eps1: float = 0.05) -> float:
    """Upper bound ``(1+eps0)/sqrt(6) chord^(3/2) sqrt(excess)`` on the area a
    curve of length ``chord + excess`` can enclose with its chord."""
    if chord <= 0:
        raise DomainError("chord must be positive")
    if perimeter_excess < 0 or perimeter_excess > 2.0 * eps1 * chord:
        raise DomainError(
            f"perimeter excess {perimeter_excess:.4g} outside the small-excess regime [0, {2 * eps1 * chord:.4g}]"
        )
    return (1.0 + eps0) / math.sqrt(6.0) * chord**1.5 * math.sqrt(perimeter_excess)


def lemma2_check(chord: float, theta: float, eps0: float = 0.01, eps1: float = 0.05) -> dict:
    """Compare the circular cap with the bound for the arc's own length excess."""
    excess = arc_length(chord, theta) - chord
    bound = lemma2_area_bound(chord, excess, eps0, eps1)
    cap = abs(cap_area(chord, theta))
    return {"theta": theta, "excess": excess, "bound": bound, "cap": cap, "gap": bound - cap, "holds": cap <= bound}


# ---------------------------------------------------------------------------
# brute-force search on the rectangle
# ---------------------------------------------------------------------------

def _boundary_grid(a, b, per_side):
    """Points ``k/per_side`` along each side, counter-clockwise from (0, 0)."""
    t = np.arange(per_side) / per_side
    corners = np.array([[0.0, 0.0], [a, 0.0], [a, b], [0.0, b], [0.0, 0.0]])
    pts, side, s = [], [], []
    perim = 0.0
    for k in range(4):
        p0, p1 = corners[k], corners[k + 1]
        L = float(np.hypot(*(p1 - p0)))
        pts.append(p0 + t[:, None] * (p1 - p0))
        side.append(np.full(per_side, k))
        s.append(perim + t * L)
        perim += L
    return np.concatenate(pts), np.concatenate(side), np.concatenate(s)


def _boundary_primitive(s, a, b):
    """``1/2 * int (x dy - y dx)`` along the boundary from (0,0) to arclength ``s``."""
    s = np.asarray(s, dtype=float)
    # side contributions: bottom 0, right a*b/2, top a*b/2, left 0
    out = np.zeros_like(s)
    on_right = (s > a) & (s <= a + b)
    out = np.where(on_right, 0.5 * a * (s - a), out)
    on_top = (s > a + b) & (s <= 2 * a + b)
    out = np.where(on_top, 0.5 * a * b + 0.5 * b * (s - a - b), out)
    out = np.where(s > 2 * a + b, a * b, out)
    return out


@dataclass
class BruteForceResult:
    value: float
    p0: tuple
    p1: tuple
    theta: float
    kind: str  # "opposite" or "adjacent"


def rectangle_brute_force(a=2.0, b=1.0, per_side=200, n_theta=41, theta_max=0.8, chunk=400_000):
    """Best opposite-side and adjacent-side cuts of the ``a x b`` rectangle.

    Endpoints range over ``per_side`` points per side and opening angles
    over ``n_theta`` values in ``[-theta_max, theta_max]``.  Returns a dict
    with ``"opposite"`` and ``"adjacent"`` :class:`BruteForceResult`.
    """
    pts, side, s = _boundary_grid(a, b, per_side)
    n = len(pts)
    I, J = np.triu_indices(n, k=1)
    keep = side[I] != side[J]
    I, J = I[keep], J[keep]
    opposite = (side[I] - side[J]) % 2 == 0
    thetas = np.linspace(-theta_max, theta_max, n_theta)
    total = a * b
    F = _boundary_primitive(s, a, b)
    best = {}
    for kind, mask in (("opposite", opposite), ("adjacent", ~opposite)):
        Ik, Jk = I[mask], J[mask]
        x0, y0 = pts[Ik, 0], pts[Ik, 1]
        x1, y1 = pts[Jk, 0], pts[Jk, 1]
        chord = np.hypot(x1 - x0, y1 - y0)
        # region traversed from p0 along the boundary to p1, closed by the cut back to p0
        base = F[Jk] - F[Ik] + 0.5 * (x1 * y0 - x0 * y1)
        record = (np.inf, None)
        for th in thetas:
            # the closing cut runs p1 -> p0; positive theta bulges to its right
            area = base + cap_area(chord, th)
            other = total - area
            length = arc_length(chord, th)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = length * total / (area * other)
            val = np.where((area > 1e-12) & (other > 1e-12), val, np.inf)
            # inside check only where the value could matter
            order = np.argsort(val)
            for start in range(0, len(order), chunk):
                idx = order[start : start + chunk]
                v = val[idx]
                if not np.isfinite(v[0]) or v[0] >= record[0]:
                    break
                cand = idx[v < record[0]]
                if th != 0:
                    tt = (np.arange(16) + 0.5) / 16
                    ax, ay = arc_points(x1[cand], y1[cand], x0[cand], y0[cand], np.full(len(cand), th), tt)
                    tol = 1e-12
                    ok = np.all((ax >= -tol) & (ax <= a + tol) & (ay >= -tol) & (ay <= b + tol), axis=1)
                    cand = cand[ok]
                if len(cand):
                    j = cand[np.argmin(val[cand])]
                    record = (
                        float(val[j]),
                        BruteForceResult(float(val[j]), (float(x0[j]), float(y0[j])), (float(x1[j]), float(y1[j])), float(th), kind),
                    )
                    break
        best[kind] = record[1]
    return best
