"""Finite-difference audit of the series coefficient tables.

Each table entry equals a mixed partial derivative of the ratio cut at the
centred straight cut of the undeformed rectangle, divided by the factorial
of the cut exponents.  The derivative is estimated with tensor-product
five-point stencils at three step sizes combined by Richardson
extrapolation, then compared to the stored rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import numerics
from ..functional import rc_batch
from ..geometry import PARAM_NAMES
from .coefficients import COEFF_NAMES, MONOMIALS, ExpansionTable, all_indices, get_table

REL_TOL = 1e-3
ABS_TOL = 1e-4

#: base point (q, p, theta, sigma)
BASE_POINT = np.array([0.5, 0.5, 0.0] + [0.0] * 7)


@dataclass(frozen=True)
class AuditEntry:
    index: tuple
    coefficient: str
    table_value: float
    fd_value: float
    ok: bool

    @property
    def label(self) -> str:
        return f"({','.join(self.index) or 'base'}).{self.coefficient}"

    def to_dict(self) -> dict:
        return {
            "index": ",".join(self.index) or "base",
            "coefficient": self.coefficient,
            "table": self.table_value,
            "finite_difference": self.fd_value,
            "ok": self.ok,
        }


@dataclass
class AuditReport:
    table: str
    entries: list = field(default_factory=list)

    @property
    def mismatches(self) -> list:
        return [e for e in self.entries if not e.ok]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        lines = [f"{self.table}: {len(self.entries)} coefficients, {len(self.mismatches)} mismatches"]
        for e in self.mismatches:
            lines.append(f"  {e.label}: table {e.table_value:.10g}, finite difference {e.fd_value:.10g}")
        return "\n".join(lines)


def within_tolerance(table_value: float, fd_value: float, rel=REL_TOL, abs_=ABS_TOL) -> bool:
    if table_value == 0:
        return abs(fd_value) <= abs_
    return abs(fd_value - table_value) <= rel * abs(table_value)


def derivative_orders(alpha, coeff) -> np.ndarray:
    orders = np.zeros(10, dtype=int)
    orders[:3] = MONOMIALS[coeff]
    for a in alpha:
        orders[3 + PARAM_NAMES.index(a)] += 1
    return orders


def fd_coefficient(alpha, coeff, h=0.02, levels=3) -> float:
    """Finite-difference estimate of one table entry."""
    orders = derivative_orders(alpha, coeff)
    d = numerics.mixed_partial(rc_batch, BASE_POINT, orders, h, levels)
    return d / math.prod(math.factorial(k) for k in MONOMIALS[coeff])


def audit_table(table="printed", h=0.02, levels=3, indices=None) -> AuditReport:
    tab: ExpansionTable = get_table(table)
    report = AuditReport(tab.label)
    for alpha in indices or all_indices():
        poly = tab.get(alpha)
        for name, value in zip(COEFF_NAMES, poly.coefficients()):
            fd = fd_coefficient(alpha, name, h, levels)
            tv = float(value)
            report.entries.append(AuditEntry(tuple(alpha), name, tv, fd, within_tolerance(tv, fd)))
    return report
