from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ratiocut.errors import DomainError, GraphError
from ratiocut.estimators import GraphRatioCut
from ratiocut.graphlap import (
    affinity_graph,
    best_threshold,
    bipartition,
    brute_force_bipartition,
    energy,
    f2_monotone,
    functional_F2,
    graph_p_laplacian_apply,
    interface_position,
    inverse_power_method,
    lower_median,
    random_connected_graph,
    ratio_cut_value,
    read_edges_csv,
    read_partition_csv,
    rectangle_polygon,
    sample_domain,
    var_p,
    write_edges_csv,
    write_partition_csv,
)


def path(n, w=1.0):
    W = np.zeros((n, n))
    for k in range(n - 1):
        W[k, k + 1] = W[k + 1, k] = w
    return sp.csr_matrix(W)


def two_cliques(m=5, bridge=0.05):
    n = 2 * m
    W = np.zeros((n, n))
    W[:m, :m] = 1.0
    W[m:, m:] = 1.0
    np.fill_diagonal(W, 0.0)
    W[m - 1, m] = W[m, m - 1] = bridge
    return sp.csr_matrix(W)


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

def test_path3_values():
    W = path(3)
    f = np.array([1.0, 0.0, -1.0])
    assert energy(W, f) == 2.0
    assert lower_median(f) == 0.0
    assert var_p(f) == 2.0
    assert functional_F2(W, f) == 1.0
    assert graph_p_laplacian_apply(W, f, 1.0).tolist() == [1.0, 0.0, -1.0]


def test_two_node_eigenvector():
    W = path(2)
    f = np.array([1.0, -1.0])
    assert functional_F2(W, f) == 1.0
    # (1, -1) is an eigenvector: Delta_1 f = lambda sign(f)
    assert graph_p_laplacian_apply(W, f, 1.0).tolist() == [1.0, -1.0]


def test_p2_is_the_graph_laplacian():
    rng = np.random.default_rng(0)
    W = random_connected_graph(8, rng)
    f = rng.standard_normal(8)
    L = sp.diags(np.asarray(W.sum(axis=1)).ravel()) - W
    assert graph_p_laplacian_apply(W, f, 2.0) == pytest.approx(L @ f, abs=1e-12)
    assert energy(W, f, 2.0) == pytest.approx(0.5 * f @ (L @ f) * 2, rel=1e-12)


def test_p_below_one_rejected():
    with pytest.raises(DomainError):
        graph_p_laplacian_apply(path(3), np.zeros(3), 0.5)


def test_constant_function():
    W = path(4)
    f = np.full(4, 2.5)
    assert energy(W, f) == 0.0
    assert np.all(graph_p_laplacian_apply(W, f, 1.0) == 0.0)
    with pytest.raises(GraphError):
        functional_F2(W, f)


def test_var_p_general_exponent():
    f = np.array([0.0, 1.0, 3.0])
    assert var_p(f, 2) == pytest.approx(np.sum((f - f.mean()) ** 2))
    # p = 1.5: compare with a fine grid over c
    c = np.linspace(0, 3, 30001)
    ref = np.min(np.sum(np.abs(f[:, None] - c) ** 1.5, axis=0))
    assert var_p(f, 1.5) == pytest.approx(ref, rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=5, max_size=5), st.floats(0.1, 10), st.floats(-10, 10))
def test_F2_scale_and_shift_invariant(vals, a, b):
    f = np.array(vals)
    if np.ptp(f) < 1e-3:
        return
    W = path(5)
    assert functional_F2(W, a * f + b) == pytest.approx(functional_F2(W, f), rel=1e-9)


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

def test_bipartition_by_sign():
    pos, neg = bipartition([0.3, -0.2, 0.1])
    assert pos.tolist() == [0, 2] and neg.tolist() == [1]
    # zeros join the smaller side
    pos, neg = bipartition([1.0, 0.0, -1.0, -2.0])
    assert pos.tolist() == [0, 1]
    with pytest.raises(GraphError):
        bipartition([1.0, 2.0, 0.5])


def test_ratio_cut_value_and_threshold():
    W = path(4)
    mask = np.array([True, True, False, False])
    assert ratio_cut_value(W, mask) == 0.5
    m, v = best_threshold(W, np.array([2.0, 1.0, -1.0, -2.0]))
    assert v == 0.5 and m.tolist() == mask.tolist()
    with pytest.raises(GraphError):
        ratio_cut_value(W, np.ones(4, dtype=bool))


def test_path4_split_in_the_middle():
    res = inverse_power_method(path(4), starts=3)
    pos, neg = bipartition(res.f)
    assert sorted([pos.tolist(), neg.tolist()]) == [[0, 1], [2, 3]]
    assert res.value == pytest.approx(0.5, rel=1e-6)


def test_two_cliques_separate():
    W = two_cliques()
    res = inverse_power_method(W)
    pos, _ = bipartition(res.f)
    assert sorted(pos.tolist()) in ([0, 1, 2, 3, 4], [5, 6, 7, 8, 9])
    mask, val = brute_force_bipartition(W)
    assert val == pytest.approx(0.01)
    assert f2_monotone(res)


def test_ipm_matches_brute_force_on_small_graphs():
    rng = np.random.default_rng(42)
    hits = 0
    for _ in range(20):
        W = random_connected_graph(8, rng)
        res = inverse_power_method(W, starts=5, seed=1)
        assert f2_monotone(res)
        _, best = brute_force_bipartition(W)
        pos, _ = bipartition(res.f)
        m = np.zeros(8, dtype=bool)
        m[pos] = True
        assert ratio_cut_value(W, m) >= best - 1e-12
        hits += ratio_cut_value(W, m) <= best * (1 + 1e-9)
    assert hits >= 18


def test_disconnected_graph_rejected():
    W = sp.block_diag([path(3), path(3)]).tocsr()
    with pytest.raises(GraphError, match="not connected"):
        inverse_power_method(W)
    with pytest.raises(GraphError):
        brute_force_bipartition(sp.csr_matrix(np.ones((17, 17))))


# ---------------------------------------------------------------------------
# point clouds
# ---------------------------------------------------------------------------

def test_sample_domain_is_seeded_and_inside():
    a = sample_domain(rectangle_polygon(2.0, 1.0), 500, seed=3)
    b = sample_domain(rectangle_polygon(2.0, 1.0), 500, seed=3)
    assert np.array_equal(a.points, b.points)
    assert a.points.min() >= 0.0 and a.points[:, 0].max() <= 2.0 and a.points[:, 1].max() <= 1.0
    with pytest.raises(DomainError):
        sample_domain(rectangle_polygon(), 50)
    with pytest.raises(DomainError):
        # thin diagonal sliver: area is 0.05% of its bounding box
        sample_domain(np.array([[0.0, 0.0], [1.0, 0.999], [1.0, 1.0]]), 200)


def test_affinity_graph():
    pts = sample_domain(rectangle_polygon(2.0, 1.0), 300, seed=1).points
    g = affinity_graph(pts, k=8)
    assert g.connected and g.n == 300
    W = g.weights
    assert abs(W - W.T).max() == 0
    assert W.diagonal().sum() == 0
    assert W.data.max() <= 1.0
    assert not affinity_graph(pts, radius=0.01).connected
    with pytest.raises(GraphError):
        affinity_graph(pts, k=300)


def test_small_cloud_cut_is_vertical():
    pts = sample_domain(rectangle_polygon(2.0, 1.0), 400, seed=7).points
    g = affinity_graph(pts, k=10)
    res = inverse_power_method(g.weights, starts=2)
    assert abs(interface_position(pts, g.weights, res.f) - 1.0) < 0.2


def test_csv_round_trip(tmp_path):
    pts = sample_domain(rectangle_polygon(), 120, seed=0).points
    g = affinity_graph(pts, k=6)
    f = pts[:, 0] - 1.0
    write_partition_csv(tmp_path / "p.csv", pts, f)
    write_edges_csv(tmp_path / "e.csv", g.weights)
    P, side = read_partition_csv(tmp_path / "p.csv")
    assert np.array_equal(P, pts)
    assert np.array_equal(side == 1, f > 0)
    W = read_edges_csv(tmp_path / "e.csv", n=120)
    assert abs(W - g.weights).max() == 0


# ---------------------------------------------------------------------------
# estimator
# ---------------------------------------------------------------------------

def test_estimator_on_overlapping_blobs():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal([0, 0], 0.4, (60, 2)), rng.normal([1.6, 0], 0.4, (60, 2))])
    est = GraphRatioCut(n_neighbors=8, n_starts=2)
    labels = est.fit_predict(X)
    truth = np.r_[np.zeros(60), np.ones(60)]
    agree = max(np.mean(labels == truth), np.mean(labels != truth))
    assert agree >= 0.9
    assert est.score() == -est.ratio_cut_
    assert est.n_features_in_ == 2


def test_estimator_precomputed_and_params():
    est = GraphRatioCut(affinity="precomputed").fit(two_cliques())
    assert sorted(np.bincount(est.labels_).tolist()) == [5, 5]
    assert est.get_params()["affinity"] == "precomputed"
    with pytest.raises(ValueError):
        GraphRatioCut(affinity="rbf").fit(np.zeros((5, 2)))
