"""Parabolic stand-ins for circular top and bottom curves.

A circular top through ``(0, 1/2 + a1)`` and ``(1, 1/2 + a2)`` bulging out
by opening angle ``theta_t`` is replaced by the parabola with
``eps_t = -(1 + (a1 - a2)^2) theta_t / 2``, which has the same cap area up
to third order in the angle; likewise ``eps_b = (1 + a3^2) theta_b / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..functional import Domain, ParabolicModel
from ..geometry import CutParams, DomainParams, Segment, circular_bottom, circular_top


def curvature_from_arc(a1, a2, a3, theta_t, theta_b):
    """Parabola curvatures matching the cap areas of circular top and bottom curves."""
    if abs(theta_t) >= math.pi / 2 or abs(theta_b) >= math.pi / 2:
        raise DomainError("opening angles must satisfy |theta| < pi/2")
    eps_t = -(1.0 + (a1 - a2) ** 2) * theta_t / 2.0
    eps_b = (1.0 + a3**2) * theta_b / 2.0
    return eps_t, eps_b


def circular_domain(a1, a2, a3, theta_t, theta_b, A_WL=0.0, A_WR=0.0, height=0.5) -> Domain:
    """Trapezoid with circular top and bottom curves (positive angles bulge outwards)."""
    top = circular_top(a1, a2, theta_t, height)
    bottom = circular_bottom(a3, theta_b)
    return Domain(
        bottom,
        Segment(bottom.end, top.end),
        top,
        Segment(bottom.start, top.start),
        A_WL=A_WL,
        A_WR=A_WR,
    )


def matched_parabolic(a1, a2, a3, theta_t, theta_b, A_WL=0.0, A_WR=0.0) -> DomainParams:
    eps_t, eps_b = curvature_from_arc(a1, a2, a3, theta_t, theta_b)
    return DomainParams(a1, a2, a3, eps_t, eps_b, A_WL, A_WR)


@dataclass(frozen=True)
class GapReport:
    curve_gap: float
    total_area_gap: float
    left_area_gap: float
    rc_gap: float
    exponents: dict | None = None

    def to_dict(self) -> dict:
        return {
            "curve_gap": self.curve_gap,
            "total_area_gap": self.total_area_gap,
            "left_area_gap": self.left_area_gap,
            "rc_gap": self.rc_gap,
            "exponents": self.exponents,
        }


def _gaps(a1, a2, a3, theta_t, theta_b, cut, samples=401):
    circ = circular_domain(a1, a2, a3, theta_t, theta_b)
    para = ParabolicModel(matched_parabolic(a1, a2, a3, theta_t, theta_b), gate=None)
    x = np.linspace(0.0, 1.0, samples)
    pd = para.domain()
    gap = max(
        float(np.max(np.abs(circ.top.y_at_x(x) - pd.top.y_at_x(x)))),
        float(np.max(np.abs(circ.bottom.y_at_x(x) - pd.bottom.y_at_x(x)))),
    )
    bc = circ.breakdown(cut)
    bp = para.breakdown(cut)
    return (
        gap,
        abs(circ.total_area - para.total_area),
        abs(bc.area_left - bp.area_left),
        abs(bc.value - bp.value),
    )


def parabolic_circular_gap(a1, a2, a3, theta_t, theta_b, cut=None, refine=True) -> GapReport:
    """Differences between the circular domain and its matched parabolic model.

    With ``refine`` the angles are halved twice and the log-log slope of
    each gap against the angle scale is reported.
    """
    cut = CutParams() if cut is None else (cut if isinstance(cut, CutParams) else CutParams.from_array(cut))
    g0 = _gaps(a1, a2, a3, theta_t, theta_b, cut)
    exps = None
    if refine and (theta_t != 0 or theta_b != 0):
        rows = [g0] + [_gaps(a1, a2, a3, theta_t / 2**k, theta_b / 2**k, cut) for k in (1, 2)]
        rows = np.array(rows)
        scales = np.log(np.array([1.0, 0.5, 0.25]))
        names = ("curve_gap", "total_area_gap", "left_area_gap", "rc_gap")
        exps = {}
        for i, name in enumerate(names):
            col = rows[:, i]
            if np.all(col > 0):
                exps[name] = float(np.polyfit(scales, np.log(col), 1)[0])
            else:
                exps[name] = float("nan")
    return GapReport(*g0, exponents=exps)
