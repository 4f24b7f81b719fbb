from __future__ import annotations

import xml.etree.ElementTree as ET

from ratiocut import svg
from ratiocut.functional import ParabolicModel
from ratiocut.geometry import CutParams, DomainParams


def _figures():
    line = svg.line_plot([("a", [0, 1, 2], [1.0, 0.5, 0.25], "solid"), ("b", [0, 1, 2], [1.0, 0.6, 0.3], "dashdot")],
                         title="t", xlabel="x", ylabel="y")
    model = ParabolicModel(DomainParams(a1=0.05, eps_t=0.04))
    dom = svg.domain_figure(model.domain().loop(), [(model.cut_arc(CutParams(0.48, 0.52, 0.05)), "solid", "cut")])
    pts = [(0.1, 0.2), (0.5, 0.5), (0.9, 0.1)]
    scatter = svg.scatter_partition(pts, [1, -1, 1])
    return [line, dom, scatter]


def test_figures_are_well_formed_svg():
    for fig in _figures():
        root = ET.fromstring(fig.to_string())
        assert root.tag.endswith("svg")


def test_figures_are_deterministic(tmp_path):
    a = [f.to_string() for f in _figures()]
    b = [f.to_string() for f in _figures()]
    assert a == b
    _figures()[0].write(tmp_path / "x.svg")
    assert (tmp_path / "x.svg").read_text() == a[0]
