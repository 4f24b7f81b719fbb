"""Graph 1-Laplacian bipartition of point clouds sampled from a domain.

The second eigenvector of the graph 1-Laplacian minimises

    F(f) = (1/2 sum_ij w_ij |f_i - f_j|) / min_c sum_i |f_i - c|

and is computed with the nonlinear inverse power method: each outer step
solves the convex problem

    g = argmin_{|g|_2 <= 1}  1/2 sum_ij w_ij |g_i - g_j| - lambda <g, v>

with ``v`` a subgradient of the denominator, through its box-constrained
dual (accelerated projected gradient).  The sign pattern of the result
bipartitions the graph.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import DomainError, GraphError
from .functional import _point_in_polygon

MIN_ACCEPT_RATE = 0.01


# ---------------------------------------------------------------------------
# sampling and graph construction
# ---------------------------------------------------------------------------

@dataclass
class PointCloud:
    points: np.ndarray
    seed: int
    domain: object = None

    def __len__(self):
        return len(self.points)


def _polygon_of(domain, samples=256) -> np.ndarray:
    """Dense boundary polygon of a rectangle spec, loop, domain or quadrilateral."""
    if isinstance(domain, np.ndarray) or isinstance(domain, (list, tuple)) and np.ndim(domain) == 2:
        return np.asarray(domain, dtype=float)
    sides = getattr(domain, "sides", None)
    if sides is None and hasattr(domain, "loop"):
        sides = domain.loop()
    if sides is None:
        sides = list(domain)
    t = np.linspace(0.0, 1.0, samples, endpoint=False)
    return np.concatenate([np.stack(s.point(t), axis=-1) for s in sides])


def rectangle_polygon(width=2.0, height=1.0) -> np.ndarray:
    return np.array([[0.0, 0.0], [width, 0.0], [width, height], [0.0, height]])


def sample_domain(domain, N: int, seed: int = 0) -> PointCloud:
    """Uniform rejection sample of ``N`` points inside ``domain``."""
    if N < 100:
        raise DomainError("at least 100 points are required")
    poly = _polygon_of(domain)
    lo = poly.min(axis=0)
    hi = poly.max(axis=0)
    area = abs(0.5 * float(np.dot(poly[:, 0], np.roll(poly[:, 1], -1)) - np.dot(poly[:, 1], np.roll(poly[:, 0], -1))))
    box = float(np.prod(hi - lo))
    if box <= 0 or area <= 0 or area / box < MIN_ACCEPT_RATE:
        raise DomainError("domain is degenerate: rejection sampling acceptance below 1%")
    rng = np.random.default_rng(seed)
    out = []
    have = 0
    drawn = 0
    while have < N:
        batch = max(256, int(1.2 * (N - have) * box / area))
        pts = lo + rng.random((batch, 2)) * (hi - lo)
        drawn += batch
        inside = _point_in_polygon(pts[:, 0], pts[:, 1], poly)
        out.append(pts[inside])
        have += int(inside.sum())
        if drawn > 200 * N and have / drawn < MIN_ACCEPT_RATE:
            raise DomainError("rejection sampling acceptance below 1%")
    return PointCloud(np.concatenate(out)[:N], seed, domain)


@dataclass
class AffinityGraph:
    weights: sp.csr_matrix
    k: int | None
    bandwidth: float
    radius: float | None = None
    n_components: int = 1

    @property
    def connected(self) -> bool:
        return self.n_components == 1

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def affinity_graph(points, k: int = 10, bandwidth: float | None = None, radius: float | None = None) -> AffinityGraph:
    """Gaussian weights ``exp(-d^2/h^2)`` on the symmetrised kNN graph
    (or on all pairs within ``radius``).  ``h`` defaults to the median
    k-th neighbour distance."""
    X = np.asarray(points, dtype=float)
    n = len(X)
    tree = cKDTree(X)
    if radius is not None:
        pairs = tree.query_pairs(radius, output_type="ndarray")
        rows, cols = pairs[:, 0], pairs[:, 1]
        d = np.linalg.norm(X[rows] - X[cols], axis=1)
        h = bandwidth if bandwidth is not None else (float(np.median(d)) if len(d) else radius)
        k_used = None
    else:
        if k < 1 or k >= n:
            raise GraphError("k must satisfy 1 <= k < number of points")
        dist, idx = tree.query(X, k + 1)
        rows = np.repeat(np.arange(n), k)
        cols = idx[:, 1:].ravel()
        d = dist[:, 1:].ravel()
        h = bandwidth if bandwidth is not None else float(np.median(dist[:, -1]))
        k_used = k
    w = np.exp(-(d**2) / h**2)
    W = sp.coo_matrix((w, (rows, cols)), shape=(n, n)).tocsr()
    W = W.maximum(W.T).tocsr()
    W.setdiag(0)
    W.eliminate_zeros()
    ncomp, _ = connected_components(W, directed=False)
    return AffinityGraph(W, k_used, float(h), radius, int(ncomp))


def _as_sparse(W) -> sp.csr_matrix:
    if isinstance(W, AffinityGraph):
        W = W.weights
    W = sp.csr_matrix(W, dtype=float)
    if W.shape[0] != W.shape[1]:
        raise GraphError("weight matrix must be square")
    return W


def _edges(W):
    """Each undirected edge once: ``(i, j, w)`` with ``i < j``."""
    U = sp.triu(_as_sparse(W), k=1).tocoo()
    return U.row, U.col, U.data


# ---------------------------------------------------------------------------
# p-Laplacian and the Rayleigh-type quotient
# ---------------------------------------------------------------------------

def _phi(x, p):
    return np.sign(x) * np.abs(x) ** (p - 1.0)


def graph_p_laplacian_apply(W, f, p: float) -> np.ndarray:
    """``(Delta_p f)_i = sum_j w_ij phi_p(f_i - f_j)`` with ``phi_p(x) = sign(x)|x|^(p-1)``."""
    W = _as_sparse(W)
    f = np.asarray(f, dtype=float)
    if p < 1:
        raise DomainError("p must be at least 1")
    if f.shape != (W.shape[0],):
        raise GraphError(f"function has shape {f.shape}, graph has {W.shape[0]} vertices")
    C = W.tocoo()
    vals = C.data * _phi(f[C.row] - f[C.col], p)
    return np.bincount(C.row, weights=vals, minlength=W.shape[0])


def energy(W, f, p: float = 1.0) -> float:
    """``<f, Delta_p f> = 1/2 sum_ij w_ij |f_i - f_j|^p``."""
    i, j, w = _edges(W)
    f = np.asarray(f, dtype=float)
    return float(np.sum(w * np.abs(f[i] - f[j]) ** p))


def lower_median(f) -> float:
    f = np.sort(np.asarray(f, dtype=float))
    return float(f[(len(f) - 1) // 2])


def var_p(f, p: float = 1.0) -> float:
    """``min_c sum_i |f_i - c|^p`` (the lower median attains it at ``p = 1``)."""
    f = np.asarray(f, dtype=float)
    if p == 1:
        return float(np.sum(np.abs(f - lower_median(f))))
    if p == 2:
        return float(np.sum((f - f.mean()) ** 2))
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(lambda c: np.sum(np.abs(f - c) ** p), bounds=(f.min(), f.max()), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.fun)


def functional_F2(W, f, p: float = 1.0) -> float:
    den = var_p(f, p)
    if den <= 0:
        raise GraphError("trivial eigenvector: f is constant")
    return energy(W, f, p) / den


# ---------------------------------------------------------------------------
# discrete ratio cut
# ---------------------------------------------------------------------------

def cut_value(W, mask) -> float:
    i, j, w = _edges(W)
    m = np.asarray(mask, dtype=bool)
    return float(np.sum(w[m[i] != m[j]]))


def ratio_cut_value(W, mask) -> float:
    """``cut(S, S^c) / min(|S|, |S^c|)``."""
    m = np.asarray(mask, dtype=bool)
    small = min(int(m.sum()), int((~m).sum()))
    if small == 0:
        raise GraphError("a bipartition needs two non-empty sides")
    return cut_value(W, m) / small


def brute_force_bipartition(W):
    """Exhaustive minimum of the discrete ratio cut; returns ``(mask, value)``."""
    W = _as_sparse(W)
    n = W.shape[0]
    if n > 16:
        raise GraphError("exhaustive search is limited to 16 vertices")
    codes = np.arange(1, 2 ** (n - 1))
    X = ((codes[:, None] >> np.arange(n - 1)) & 1).astype(float)
    X = np.hstack([X, np.zeros((len(X), 1))])
    L = sp.diags(np.asarray(W.sum(axis=1)).ravel()) - W
    cuts = np.einsum("ki,ki->k", X @ L.toarray(), X)
    sizes = X.sum(axis=1)
    vals = cuts / np.minimum(sizes, n - sizes)
    k = int(np.argmin(vals))
    return X[k].astype(bool), float(vals[k])


def bipartition(f):
    """Split by sign; zero entries join the smaller side.  Returns index arrays
    ``(positive_side, negative_side)`` (0-based)."""
    f = np.asarray(f, dtype=float)
    pos = f > 0
    neg = f < 0
    zero = ~(pos | neg)
    if zero.any():
        if pos.sum() <= neg.sum():
            pos = pos | zero
        else:
            neg = neg | zero
    if not pos.any() or not neg.any():
        raise GraphError("function has a single sign: no cut")
    return np.flatnonzero(pos), np.flatnonzero(neg)


def best_threshold(W, f):
    """Best level set ``{f > t}`` for the discrete ratio cut; returns ``(mask, value)``."""
    W = _as_sparse(W)
    f = np.asarray(f, dtype=float)
    order = np.argsort(-f, kind="stable")
    n = len(f)
    pos = np.empty(n, dtype=int)
    pos[order] = np.arange(n)
    i, j, w = _edges(W)
    # adding vertices in order: an edge is cut while exactly one end is in
    a = np.minimum(pos[i], pos[j])
    b = np.maximum(pos[i], pos[j])
    delta = np.zeros(n + 1)
    np.add.at(delta, a, w)
    np.add.at(delta, b, -w)
    cuts = np.cumsum(delta)[: n - 1]
    sizes = np.arange(1, n)
    vals = cuts / np.minimum(sizes, n - sizes)
    # only split between distinct values
    fs = f[order]
    ok = fs[:-1] > fs[1:]
    if not ok.any():
        raise GraphError("trivial eigenvector: f is constant")
    vals = np.where(ok, vals, np.inf)
    k = int(np.argmin(vals))
    mask = np.zeros(n, dtype=bool)
    mask[order[: k + 1]] = True
    return mask, float(vals[k])


# ---------------------------------------------------------------------------
# inverse power method
# ---------------------------------------------------------------------------

@dataclass
class EigenResult:
    f: np.ndarray
    value: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)
    seed: int | None = None
    start: str = ""
    inner_stalls: int = 0

    @property
    def lam(self) -> float:
        return self.value


def _center(f):
    return f - lower_median(f)


def _subgradient(f):
    """Element of the subdifferential of ``sum |f_i - median|`` with zero sum."""
    v = np.sign(f)
    zero = v == 0
    if zero.any():
        v[zero] = np.clip(-v.sum() / zero.sum(), -1.0, 1.0)
    return v


def _inner(i, j, w, n, lam, v, alpha0, L, max_iter, tol):
    """``min_{|g|<=1} sum_e w_e|g_i-g_j| - lam <g,v>`` through the dual
    ``min_{|alpha|_inf <= 1} |B^T(w alpha) - lam v|^2``; returns ``(g, primal, alpha, gap)``."""

    def z_of(alpha):
        return np.bincount(i, w * alpha, n) - np.bincount(j, w * alpha, n) - lam * v

    alpha = alpha0.copy()
    y = alpha.copy()
    t = 1.0
    step = 1.0 / L
    gap = np.inf
    best = None
    for it in range(max_iter):
        z = z_of(y)
        grad = 2.0 * w * (z[i] - z[j])
        a_new = np.clip(y - step * grad, -1.0, 1.0)
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = a_new + ((t - 1.0) / t_new) * (a_new - alpha)
        alpha, t = a_new, t_new
        if it % 10 == 9 or it == max_iter - 1:
            z = z_of(alpha)
            nz = float(np.linalg.norm(z))
            if nz == 0:
                return np.zeros(n), 0.0, alpha, 0.0
            g = -z / nz
            primal = float(np.sum(w * np.abs(g[i] - g[j])) - lam * np.dot(g, v))
            gap = primal + nz
            if best is None or primal < best[1]:
                best = (g, primal)
            if gap <= tol * max(1.0, nz):
                break
    return best[0], best[1], alpha, gap


def _fiedler(W):
    W = _as_sparse(W)
    n = W.shape[0]
    d = np.asarray(W.sum(axis=1)).ravel()
    L = sp.diags(d) - W
    if n <= 3000:
        vals, vecs = np.linalg.eigh(L.toarray())
        return vecs[:, 1]
    from scipy.sparse.linalg import eigsh

    vals, vecs = eigsh(L.tocsc(), k=2, sigma=-1e-6, which="LM")
    return vecs[:, np.argsort(vals)[1]]


def _single_run(W, f0, max_outer, rel_tol, inner_iter, inner_tol, threshold):
    i, j, w = _edges(W)
    n = W.shape[0]
    deg2 = np.bincount(i, w * w, n) + np.bincount(j, w * w, n)
    L = 4.0 * float(deg2.max()) if len(w) else 1.0
    f = _center(np.asarray(f0, dtype=float))
    f = f / np.linalg.norm(f)
    lam = functional_F2(W, f)
    history = [lam]
    best_set = best_threshold(W, f) if threshold else (None, np.inf)
    alpha = np.zeros(len(w))
    converged = False
    stalls = 0
    it = 0
    for it in range(1, max_outer + 1):
        v = _subgradient(f)
        g, primal, alpha, gap = _inner(i, j, w, n, lam, v, alpha, L, inner_iter, inner_tol)
        cand = None
        if primal < 0 and np.ptp(g) > 0:
            fc = _center(g)
            fc = fc / np.linalg.norm(fc)
            cand = (functional_F2(W, fc), fc)
        elif gap > inner_tol:
            stalls += 1
        if threshold and cand is not None:
            mask, val = best_threshold(W, cand[1])
            if val < best_set[1]:
                best_set = (mask, val)
        if cand is None or cand[0] >= lam:
            converged = True
            break
        new_lam, f = cand
        if new_lam > history[-1]:
            raise AssertionError("inverse power method increased the functional")
        decrease = (lam - new_lam) / lam
        lam = new_lam
        history.append(lam)
        if decrease < rel_tol:
            converged = True
            break
    if threshold and best_set[1] < lam:
        # the best level set seen is itself a (lower) value of the functional
        fm = _center(best_set[0].astype(float))
        f = fm / np.linalg.norm(fm)
        lam = functional_F2(W, f)
        history.append(lam)
    return f, lam, it, converged, history, stalls


def inverse_power_method(
    W,
    starts: int = 5,
    seed: int = 0,
    max_outer: int = 500,
    rel_tol: float = 1e-6,
    inner_iter: int = 2000,
    inner_tol: float = 1e-8,
    threshold: bool = True,
) -> EigenResult:
    """Multi-start nonlinear inverse power method for the 1-Laplacian.

    The first start is the thresholded Fiedler vector of the ordinary graph
    Laplacian, the rest are seeded Gaussian vectors; the best final value
    wins (earlier start on ties).  With ``threshold`` each outer step also
    tries the best level set of the new iterate and keeps it if better.
    """
    W = _as_sparse(W)
    n = W.shape[0]
    if n < 2:
        raise GraphError("graph needs at least two vertices")
    ncomp, _ = connected_components(W, directed=False)
    if ncomp != 1:
        raise GraphError(f"graph is not connected ({ncomp} components)")
    rng = np.random.default_rng(seed)
    inits = []
    fied = _fiedler(W)
    inits.append(("fiedler", np.where(fied > np.median(fied), 1.0, -1.0) if np.ptp(fied) > 0 else fied))
    for k in range(1, starts):
        inits.append((f"random-{k}", rng.standard_normal(n)))
    best = None
    for name, f0 in inits:
        if np.ptp(f0) == 0:
            continue
        f, lam, it, conv, hist, stalls = _single_run(W, f0, max_outer, rel_tol, inner_iter, inner_tol, threshold)
        res = EigenResult(f, lam, it, conv, hist, seed, name, stalls)
        if best is None or lam < best.value - 1e-15 * max(1.0, abs(best.value)):
            best = res
    if best is None:
        raise GraphError("no admissible start")
    return best


def f2_monotone(result: EigenResult) -> bool:
    h = np.asarray(result.history)
    return bool(np.all(np.diff(h) <= 0))


# ---------------------------------------------------------------------------
# helpers for the continuum check and IO
# ---------------------------------------------------------------------------

def interface_position(points, W, f) -> float:
    """Median abscissa of the midpoints of cut edges."""
    pts = np.asarray(points, dtype=float)
    i, j, _ = _edges(W)
    pos, _neg = bipartition(f)
    m = np.zeros(len(pts), dtype=bool)
    m[pos] = True
    cut = m[i] != m[j]
    if not cut.any():
        raise GraphError("partition has no cut edges")
    return float(np.median(0.5 * (pts[i[cut], 0] + pts[j[cut], 0])))


def random_connected_graph(n, rng, density=0.4, wmin=0.1, wmax=1.0):
    while True:
        W = np.zeros((n, n))
        for a, b in itertools.combinations(range(n), 2):
            if rng.random() < density:
                W[a, b] = W[b, a] = rng.uniform(wmin, wmax)
        if connected_components(sp.csr_matrix(W), directed=False)[0] == 1:
            return sp.csr_matrix(W)


def _fmt(x) -> str:
    return repr(float(x))


def write_partition_csv(path, points, f) -> None:
    pos, _ = bipartition(f)
    side = np.full(len(points), -1)
    side[pos] = 1
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["x", "y", "side"])
        for (x, y), s in zip(np.asarray(points), side):
            wr.writerow([_fmt(x), _fmt(y), int(s)])


def write_edges_csv(path, W) -> None:
    i, j, w = _edges(W)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["i", "j", "w"])
        for a, b, c in zip(i, j, w):
            wr.writerow([int(a), int(b), _fmt(c)])


def read_partition_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    pts = np.array([[float(r["x"]), float(r["y"])] for r in rows])
    side = np.array([int(r["side"]) for r in rows])
    return pts, side


def read_edges_csv(path, n=None):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    i = np.array([int(r["i"]) for r in rows])
    j = np.array([int(r["j"]) for r in rows])
    w = np.array([float(r["w"]) for r in rows])
    n = n if n is not None else int(max(i.max(), j.max()) + 1)
    W = sp.coo_matrix((w, (i, j)), shape=(n, n))
    return (W + W.T).tocsr()
