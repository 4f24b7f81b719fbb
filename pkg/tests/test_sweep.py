from __future__ import annotations

import csv
import io
from fractions import Fraction

import numpy as np
import pytest

from ratiocut.sweep import CSV_COLUMNS, FAMILIES, SweepSpec, run_sweep, write_sweep


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("zeta", 0, 1)
    with pytest.raises(ValueError):
        SweepSpec("a1", 1, 0)
    with pytest.raises(ValueError):
        SweepSpec("a1", 0, 1, count=1)
    with pytest.raises(ValueError):
        SweepSpec("a1", 0, 1, links=(("a3", 0.5),))
    with pytest.raises(ValueError):
        SweepSpec("a1", 0, 1, links=(("a1", Fraction(1)),))


def test_linked_sigma():
    spec = FAMILIES["a1_eq_minus_eps_t_over_5"]
    s = spec.sigma(0.04)
    assert s.a1 == 0.04 and s.eps_t == pytest.approx(-0.2)
    assert spec.origin_value == 0.0
    assert FAMILIES["a1_neg"].origin_value == 0.0
    assert FAMILIES["eps_t"].origin_value == 0.0


def test_single_parameter_sweep():
    res = run_sweep(SweepSpec("a1", 0.0, 0.1, count=6, name="t"))
    assert [r.status for r in res.rows] == ["ok"] * 6
    assert res.origin_error() == 0.0
    assert res.monotone_violations() == 0
    errs = [r.abs_err for r in res.rows]
    # the predicted cut is never better than the optimum
    assert errs[-1] < 1e-2
    assert all(r.rc_opt <= r.rc_approx + 1e-12 for r in res.rows)


def test_gated_and_extended_gate():
    spec = SweepSpec("eps_t", -0.5, 0.0, count=11, name="e")
    res = run_sweep(spec)
    assert sum(r.status == "gate" for r in res.rows) == 5
    assert all(np.isnan(r.rc_opt) for r in res.rows if r.status == "gate")
    res = run_sweep(spec, gate=0.5)
    assert all(r.status == "ok" for r in res.rows)
    assert res.monotone_violations() == 0


def test_csv_layout_and_determinism(tmp_path):
    spec = SweepSpec("A_WL", 0.0, 0.05, count=4, name="w")
    a = run_sweep(spec).to_csv()
    b = run_sweep(spec).to_csv()
    assert a == b
    rows = list(csv.reader(io.StringIO(a)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 5
    files = write_sweep(run_sweep(spec), tmp_path)
    names = sorted(p.rsplit("/", 1)[-1] for p in files)
    assert names == ["sweep_w.csv", "sweep_w_config.svg", "sweep_w_error.svg", "sweep_w_values.svg"]
    assert (tmp_path / "sweep_w.csv").read_text() == a


def test_workers_do_not_change_output():
    spec = SweepSpec("a3", -0.05, 0.05, count=5, name="p")
    assert run_sweep(spec, workers=2).to_csv() == run_sweep(spec, workers=1).to_csv()
