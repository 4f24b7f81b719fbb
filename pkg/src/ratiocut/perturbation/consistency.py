"""Cross-check of the two-parameter trapezoid expansion against the full table.

The trapezoid with a straight bottom, a raised top-right corner ``a`` and a
curved top ``eps`` is the restriction ``a2 = a``, ``eps_t = eps`` of the
seven-parameter family.  Its own quadratic expansion is stored below in
the same normalisation as the full table (diagonal entries are second
derivatives, i.e. twice the printed coefficient of ``a^2``), and compared
coefficient by coefficient with the table and with finite differences.
Terms of total degree three (``a theta (q-1/2)^2`` and similar) are beyond
a quadratic polynomial and are omitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F

from .audit import fd_coefficient, within_tolerance
from .coefficients import COEFF_NAMES, QuadPoly, get_table

# (c0, cq, cp, ct, cqq, cqp, cqt, cpp, cpt, ctt)
TRAPEZOID = {
    ("a2",): QuadPoly.from_sequence([-8, -8, 8, F(-2, 3), 56, -80, 0, 56, 0, 0]),
    ("eps_t",): QuadPoly.from_sequence([F(4, 3), 0, 0, 0, F(52, 3), -40, 0, F(100, 3), 0, 0]),
    ("a2", "a2"): QuadPoly.from_sequence([20, 32, -32, 0, 240, -384, 0, 208, 0, 0]),
    ("a2", "eps_t"): QuadPoly.from_sequence([F(-8, 3), F(-8, 3), 8, 0, -72, F(464, 3), 0, -104, 0, 0]),
    ("eps_t", "eps_t"): QuadPoly.from_sequence([0, 0, 0, 0, F(244, 9), F(-568, 9), 0, F(436, 9), 0, 0]),
}


@dataclass
class ConsistencyReport:
    rows: list = field(default_factory=list)

    @property
    def disagreements(self) -> list:
        return [r for r in self.rows if r["trapezoid"] != r["table"]]

    def summary(self) -> str:
        out = [f"{len(self.rows)} coefficients compared, {len(self.disagreements)} differ"]
        for r in self.disagreements:
            fd = r.get("finite_difference")
            out.append(
                f"  {','.join(r['index'])}.{r['coefficient']}: trapezoid {r['trapezoid']}, table {r['table']}"
                + (f", finite difference {fd:.6g}" if fd is not None else "")
            )
        return "\n".join(out)


def compare_trapezoid_expansion(table="corrected", with_fd=True) -> ConsistencyReport:
    """Coefficient-by-coefficient comparison; disagreements get a finite-difference arbiter."""
    tab = get_table(table)
    rep = ConsistencyReport()
    for alpha, poly in TRAPEZOID.items():
        ref = tab.get(alpha)
        for name, a, b in zip(COEFF_NAMES, poly.coefficients(), ref.coefficients()):
            row = {"index": alpha, "coefficient": name, "trapezoid": a, "table": b}
            if a != b and with_fd:
                fd = fd_coefficient(alpha, name)
                row["finite_difference"] = fd
                row["trapezoid_ok"] = within_tolerance(float(a), fd)
                row["table_ok"] = within_tolerance(float(b), fd)
            rep.rows.append(row)
    return rep
