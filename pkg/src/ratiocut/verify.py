"""Self-verification: coefficient audit plus the rectangle and cap-bound checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .perturbation.audit import audit_table
from .perturbation.coefficients import ExpansionTable, get_table
from .rectangle import ADJACENT_FACTOR, lemma2_check, rectangle_brute_force

#: full and reduced settings; the reduced audit uses two Richardson levels
#: with 1e-2 relative / 1e-2 absolute tolerance, the reduced rectangle
#: search a 50-point-per-side grid with 11 angles
FULL = {"levels": 3, "per_side": 200, "n_theta": 41, "rel": 1e-3, "abs": 1e-4}
QUICK = {"levels": 2, "per_side": 50, "n_theta": 11, "rel": 1e-2, "abs": 1e-2}


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: list = field(default_factory=list)


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}")
            lines.extend(f"    {d}" for d in c.details)
        lines.append("verification " + ("passed" if self.passed else "FAILED"))
        return "\n".join(lines)


def check_coefficients(table="corrected", quick=False) -> CheckResult:
    settings = QUICK if quick else FULL
    tab: ExpansionTable = get_table(table)
    rep = audit_table(tab, levels=settings["levels"])
    bad = [e for e in rep.entries if not _ok(e, settings["rel"], settings["abs"])]
    details = [f"{len(rep.entries)} coefficients audited, {len(bad)} mismatches"]
    details += [f"mismatch at {e.label}: table {e.table_value:.10g}, finite difference {e.fd_value:.10g}" for e in bad]
    return CheckResult(f"coefficient audit ({tab.label})", not bad, details)


def _ok(entry, rel, abs_):
    if entry.table_value == 0:
        return abs(entry.fd_value) <= abs_
    return abs(entry.fd_value - entry.table_value) <= rel * abs(entry.table_value)


def check_rectangle(quick=False, a=2.0, b=1.0) -> CheckResult:
    s = QUICK if quick else FULL
    best = rectangle_brute_force(a, b, per_side=s["per_side"], n_theta=s["n_theta"])
    opp, adj = best["opposite"], best["adjacent"]
    target = 4.0 / a
    h = a / s["per_side"]
    at_mid = abs(opp.p0[0] - a / 2) <= h and abs(opp.p1[0] - a / 2) <= h and opp.theta == 0
    ok_val = abs(opp.value - target) <= 1e-3 * target
    ok_adj = adj.value >= ADJACENT_FACTOR / a * (1 - 1e-3)
    details = [
        f"best opposite-side cut {opp.value:.9g} (target {target:g}) from {opp.p0} to {opp.p1}, theta {opp.theta:g}",
        f"best adjacent-side cut {adj.value:.9g} (bound {ADJACENT_FACTOR / a:g})",
    ]
    return CheckResult("rectangle brute force", ok_val and at_mid and ok_adj, details)


def check_cap_bound(eps0=0.05) -> CheckResult:
    rows = [lemma2_check(1.0, th, eps0=eps0) for th in (0.05, 0.1, 0.2, 0.4)]
    holds = all(r["holds"] for r in rows)
    gaps = [r["gap"] for r in rows]
    # bound - cap shrinks as theta -> 0; cap/bound tends to 1/(1+eps0)
    shrinking = all(0 < x < y for x, y in zip(gaps, gaps[1:]))
    ratios = [r["cap"] / r["bound"] for r in rows]
    details = [f"theta {r['theta']}: cap {r['cap']:.6g} <= bound {r['bound']:.6g}, gap {r['gap']:.3g}" for r in rows]
    details.append("cap/bound ratios " + ", ".join(f"{x:.6f}" for x in ratios) + f" (limit {1 / (1 + eps0):.6f})")
    return CheckResult("cap area bound", holds and shrinking and math.isfinite(sum(ratios)), details)


def run_verification(table="corrected", quick=False) -> VerifyReport:
    rep = VerifyReport()
    rep.checks.append(check_coefficients(table, quick))
    rep.checks.append(check_rectangle(quick))
    rep.checks.append(check_cap_bound())
    return rep
