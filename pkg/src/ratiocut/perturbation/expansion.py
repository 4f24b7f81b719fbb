"""Quadratic model of the ratio cut and the implicit-function cut predictor.

Writing the cut as ``(1/2, 1/2, 0) + v`` the truncated series is

    RC ~ P_0(v) + sum_a s_a P_a(v) + sum_{a<b} s_a s_b P_ab(v) + sum_a s_a^2/2 P_aa(v)

Its critical point satisfies ``(J + J_s) v = -L(s)`` where ``J`` is the
Hessian of ``P_0``, ``J_s = sum_a s_a Hess(P_a)`` and ``L(s)`` collects the
gradients at ``v = 0`` of all parameter-dependent polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import SingularSystemError
from ..geometry import DEFAULT_GATE, PARAM_NAMES, CutParams, DomainParams, _sigma
from .coefficients import ExpansionTable, all_indices, get_table

#: predictor refuses systems worse conditioned than this
MAX_CONDITION = 1e8


def _weight(alpha, s: DomainParams):
    """Monomial weight of the multi-index in the series (with 1/2 on squares)."""
    if not alpha:
        return 1.0
    if len(alpha) == 1:
        return getattr(s, alpha[0])
    a, b = alpha
    w = getattr(s, a) * getattr(s, b)
    return w / 2.0 if a == b else w


def rc_quadratic_approx(sigma, cut, table="corrected") -> float:
    """Truncated series value of the ratio cut at ``cut``."""
    s = _sigma(sigma)
    c = cut if isinstance(cut, CutParams) else CutParams.from_array(cut)
    tab = get_table(table)
    total = 0.0
    for alpha, poly in tab.items():
        w = _weight(alpha, s)
        if w != 0:
            total += w * float(poly(c.q, c.p, c.theta))
    return float(total)


def _frac_matrix(rows):
    return np.array([[Fraction(x) for x in r] for r in rows], dtype=object)


def jacobian_base(table="corrected", exact=False):
    """Hessian of the ratio cut at the base point of the undeformed domain."""
    H = _frac_matrix(get_table(table).base.hessian())
    return H if exact else H.astype(float)


def jacobian_sigma(sigma, table="corrected") -> np.ndarray:
    """Parameter-linear correction to the Hessian."""
    s = _sigma(sigma)
    tab = get_table(table)
    out = np.zeros((3, 3))
    for a in PARAM_NAMES:
        val = getattr(s, a)
        if val != 0:
            out += val * _frac_matrix(tab.get((a,)).hessian()).astype(float)
    return out


def rhs_L(sigma, table="corrected", order="full") -> np.ndarray:
    """Gradient at the base cut of the parameter-dependent series terms.

    ``order="first"`` keeps only the terms linear in the parameters.
    """
    s = _sigma(sigma)
    tab = get_table(table)
    out = np.zeros(3)
    for alpha, poly in tab.items():
        if not alpha or (order == "first" and len(alpha) > 1):
            continue
        w = _weight(alpha, s)
        if w != 0:
            out += w * np.array([float(g) for g in poly.gradient()])
    return out


@dataclass(frozen=True)
class LinearSystem:
    """Critical-point system ``(J + J_sigma) v = -L`` of the series at ``sigma``."""

    J: np.ndarray
    J_sigma: np.ndarray
    L: np.ndarray

    def solve(self, order="full") -> np.ndarray:
        A = self.J + (self.J_sigma if order == "full" else 0.0)
        return np.linalg.solve(A, -self.L)


def linear_system(sigma, table="corrected", order="full") -> LinearSystem:
    s = _sigma(sigma)
    return LinearSystem(jacobian_base(table), jacobian_sigma(s, table), rhs_L(s, table, order))


def predict_cut(sigma, order="first", table="corrected", gate=DEFAULT_GATE) -> CutParams:
    """Predicted optimal cut from the quadratic model.

    ``first`` solves ``J v = -L_1(s)`` with the linear part of ``L``;
    ``full`` solves ``(J + J_s) v = -L(s)`` including quadratic terms.
    """
    s = _sigma(sigma)
    if gate is not None:
        s.check_gate(gate)
    if order not in ("first", "full"):
        raise ValueError("order must be 'first' or 'full'")
    A = jacobian_base(table)
    if order == "full":
        A = A + jacobian_sigma(s, table)
    rhs = -rhs_L(s, table, order)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularSystemError(f"predictor system is singular (condition number {cond:.3g})")
    v = np.linalg.solve(A, rhs)
    return CutParams(0.5 + float(v[0]), 0.5 + float(v[1]), float(v[2]))


def _inverse3(M):
    """Exact inverse of a 3x3 matrix of fractions via the adjugate."""
    m = [[Fraction(x) for x in row] for row in M]
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            cof[i][j] = (-1) ** (i + j) * minor
    det = sum(m[0][j] * cof[0][j] for j in range(3))
    if det == 0:
        raise SingularSystemError("singular matrix")
    return [[cof[j][i] / det for j in range(3)] for i in range(3)]


def first_order_matrix(table="corrected", exact=True):
    """3x7 matrix ``M`` with ``v = M s`` to first order in the parameters."""
    tab = get_table(table)
    Jinv = _inverse3(tab.base.hessian())
    M = [[Fraction(0)] * len(PARAM_NAMES) for _ in range(3)]
    for k, a in enumerate(PARAM_NAMES):
        g = tab.get((a,)).gradient()
        for i in range(3):
            M[i][k] = -sum(Jinv[i][j] * g[j] for j in range(3))
    if exact:
        return M
    return np.array([[float(x) for x in row] for row in M])
