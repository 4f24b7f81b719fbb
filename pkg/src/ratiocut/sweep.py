"""One-parameter sweeps comparing optimal cuts with the first-order predictor.

For every sample the exact optimum of the ratio cut is computed by Newton
iteration and compared with the ratio cut evaluated at the predicted cut.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import svg
from .errors import RatioCutError
from .functional import ParabolicModel
from .geometry import DEFAULT_GATE, PARAM_NAMES, DomainParams
from .optimize import optimize_cut
from .perturbation.expansion import predict_cut

CSV_COLUMNS = (
    "param", "rc_opt", "rc_approx", "abs_err",
    "q_opt", "p_opt", "theta_opt", "q_pred", "p_pred", "theta_pred", "status",
)


@dataclass(frozen=True)
class SweepSpec:
    """Sweep of ``param`` over ``[lo, hi]``; ``links`` ties other entries to it by exact ratios."""

    param: str
    lo: float
    hi: float
    count: int = 21
    links: tuple = ()  # ((name, Fraction), ...)
    fixed: tuple = ()  # ((name, value), ...)
    name: str = ""

    def __post_init__(self):
        if self.param not in PARAM_NAMES:
            raise ValueError(f"unknown parameter {self.param!r}")
        if not self.lo <= self.hi:
            raise ValueError("sweep range needs lo <= hi")
        if self.count < 2:
            raise ValueError("sweep needs at least two samples")
        for n, r in self.links:
            if n not in PARAM_NAMES or n == self.param:
                raise ValueError(f"bad linked parameter {n!r}")
            if not isinstance(r, Fraction):
                raise ValueError("link ratios must be exact fractions")
        for n, _ in self.fixed:
            if n not in PARAM_NAMES:
                raise ValueError(f"unknown parameter {n!r}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def sigma(self, value) -> DomainParams:
        d = dict(self.fixed)
        d[self.param] = float(value)
        for n, r in self.links:
            d[n] = float(r) * float(value)
        return DomainParams(**d)

    @property
    def label(self) -> str:
        return " = ".join([self.param] + [f"{n}/({r})" for n, r in self.links])

    @property
    def origin_value(self) -> float:
        """End of the range closest to the undeformed domain."""
        return self.lo if abs(self.lo) <= abs(self.hi) else self.hi


def _f(n):
    return Fraction(n)


FAMILIES = {
    "a1_pos": SweepSpec("a1", 0.0, 0.1, name="a1_pos"),
    "a1_neg": SweepSpec("a1", -0.1, 0.0, name="a1_neg"),
    "A_WL": SweepSpec("A_WL", 0.0, 0.1, name="A_WL"),
    "eps_t": SweepSpec("eps_t", -0.5, 0.0, name="eps_t"),
    "a1_eq_a3": SweepSpec("a1", 0.0, 0.1, links=(("a3", _f(1)),), name="a1_eq_a3"),
    "a1_eq_minus_a3": SweepSpec("a1", 0.0, 0.1, links=(("a3", _f(-1)),), name="a1_eq_minus_a3"),
    "a1_eq_minus_eps_t_over_5": SweepSpec("a1", 0.0, 0.1, links=(("eps_t", _f(-5)),), name="a1_eq_minus_eps_t_over_5"),
    "a1_eq_eps_b_over_5": SweepSpec("a1", 0.0, 0.1, links=(("eps_b", _f(5)),), name="a1_eq_eps_b_over_5"),
}


@dataclass
class SweepRow:
    param: float
    rc_opt: float = float("nan")
    rc_approx: float = float("nan")
    abs_err: float = float("nan")
    cut_opt: tuple = (float("nan"),) * 3
    cut_pred: tuple = (float("nan"),) * 3
    status: str = "ok"

    def as_list(self):
        return [self.param, self.rc_opt, self.rc_approx, self.abs_err, *self.cut_opt, *self.cut_pred, self.status]


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list = field(default_factory=list)
    gate: float = DEFAULT_GATE

    @property
    def ok_rows(self):
        return [r for r in self.rows if r.status == "ok"]

    def origin_error(self) -> float:
        v = self.spec.origin_value
        for r in self.rows:
            if r.param == v:
                return r.abs_err
        return float("nan")

    def monotone_violations(self, tol=1e-9) -> int:
        """Count of samples where the error shrinks moving away from the origin end."""
        rows = sorted(self.ok_rows, key=lambda r: abs(r.param - self.spec.origin_value))
        errs = [r.abs_err for r in rows]
        return sum(1 for a, b in zip(errs, errs[1:]) if b < a - tol)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for r in sorted(self.rows, key=lambda r: r.param):
            wr.writerow([x if isinstance(x, str) else repr(float(x)) for x in r.as_list()])
        return buf.getvalue()


def _evaluate(v, s: DomainParams, gate, order) -> SweepRow:
    row = SweepRow(float(v))
    if gate is not None and s.norm_inf() > gate:
        row.status = "gate"
        return row
    try:
        model = ParabolicModel(s, gate=None)
        rep = optimize_cut(model)
        pred = predict_cut(s, order=order, gate=None)
        row.rc_opt = rep.breakdown.value
        row.cut_opt = (rep.cut.q, rep.cut.p, rep.cut.theta)
        row.cut_pred = (pred.q, pred.p, pred.theta)
        row.rc_approx = model.breakdown(pred).value
        row.abs_err = abs(row.rc_approx - row.rc_opt)
    except RatioCutError as exc:
        row.status = f"error: {type(exc).__name__}"
    return row


def run_sweep(spec: SweepSpec, gate: float | None = DEFAULT_GATE, order: str = "first", workers: int = 1) -> SweepResult:
    """Evaluate every sample; failures are flagged in ``status`` and the sweep continues.

    With ``workers > 1`` samples run in a process pool; rows are sorted by
    parameter value afterwards, so the output does not depend on completion order.
    """
    res = SweepResult(spec, gate=gate)
    jobs = [(float(v), spec.sigma(v), gate, order) for v in spec.values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            res.rows = list(ex.map(_evaluate, *zip(*jobs)))
    else:
        res.rows = [_evaluate(*j) for j in jobs]
    res.rows.sort(key=lambda r: r.param)
    return res


def sweep_figures(result: SweepResult):
    """``(values, error, configuration)`` figures for one sweep."""
    spec = result.spec
    ok = result.ok_rows
    xs = [r.param for r in ok]
    title = spec.name or spec.label
    values = svg.line_plot(
        [("optimal", xs, [r.rc_opt for r in ok], "solid"), ("approximate", xs, [r.rc_approx for r in ok], "dashdot")],
        title=f"ratio cut values ({title})", xlabel=spec.label, ylabel="RC",
    )
    error = svg.line_plot(
        [("|approx - opt|", xs, [r.abs_err for r in ok], "solid")],
        title=f"absolute error ({title})", xlabel=spec.label, ylabel="abs error",
    )
    far = max(ok, key=lambda r: abs(r.param - spec.origin_value)) if ok else None
    if far is None:
        config = svg.Figure()
    else:
        model = ParabolicModel(spec.sigma(far.param), gate=None)
        dom = model.domain()
        config = svg.domain_figure(
            dom.loop(),
            [(model.cut_arc(far.cut_opt), "solid", "optimal"), (model.cut_arc(far.cut_pred), "dashdot", "approximate")],
            title=f"{spec.label} = {far.param:g}",
        )
    return values, error, config


def write_sweep(result: SweepResult, out_dir, formats=("csv", "svg")) -> list:
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, f"sweep_{result.spec.name or result.spec.param}")
    written = []
    if "csv" in formats:
        with open(stem + ".csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(result.to_csv())
        written.append(stem + ".csv")
    if "svg" in formats:
        for fig, suffix in zip(sweep_figures(result), ("values", "error", "config")):
            fig.write(f"{stem}_{suffix}.svg")
            written.append(f"{stem}_{suffix}.svg")
    return written
