"""Minimisation of the ratio cut over circular-arc cuts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, GeometryError
from .functional import CutFunctional, ParabolicModel, RatioCutBreakdown
from .geometry import DEFAULT_GATE, CutParams

GRAD_TOL = 1e-10
FALLBACK_BOX = ((0.3, 0.7), (0.3, 0.7), (-0.5, 0.5))


@dataclass(frozen=True)
class OptimizeReport:
    cut: CutParams
    breakdown: RatioCutBreakdown
    iterations: int
    gradient_norm: float
    hessian_psd: bool
    seed: CutParams | None = None
    used_fallback: bool = False
    hessian: np.ndarray | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "cut": {"q": self.cut.q, "p": self.cut.p, "theta": self.cut.theta},
            "value": self.breakdown.value,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "hessian_psd": self.hessian_psd,
            "used_fallback": self.used_fallback,
        }


def _target(sigma_or_model, normalized=False, gate=DEFAULT_GATE) -> CutFunctional:
    if isinstance(sigma_or_model, CutFunctional):
        return sigma_or_model
    return ParabolicModel(sigma_or_model, normalized=normalized, gate=gate)


def grid_values(target: CutFunctional, qs, ps, ts, chunk=20000):
    """Ratio cut on the tensor grid ``qs x ps x ts`` (inf where invalid)."""
    Q, P, T = np.meshgrid(qs, ps, ts, indexing="ij")
    flat = np.stack([Q.ravel(), P.ravel(), T.ravel()], axis=1)
    out = np.empty(len(flat))
    for i in range(0, len(flat), chunk):
        out[i : i + chunk] = target.values(flat[i : i + chunk], check=True)
    return out.reshape(Q.shape)


def brute_force_search(sigma, n=41, box=((0.3, 0.7), (0.3, 0.7), (-0.4, 0.4)), normalized=False, gate=DEFAULT_GATE):
    """Exhaustive grid minimum; returns ``(cut, value)``.

    ``n`` is a per-axis count or a triple of counts.
    """
    counts = (n, n, n) if np.isscalar(n) else tuple(n)
    if min(counts) < 11:
        raise ValueError("grid resolution must be at least 11 per axis")
    target = _target(sigma, normalized, gate)
    axes = [np.linspace(lo, hi, k) for (lo, hi), k in zip(box, counts)]
    vals = grid_values(target, *axes)
    if not np.isfinite(vals).any():
        raise GeometryError("no admissible cut on the grid")
    i, j, k = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return CutParams(float(axes[0][i]), float(axes[1][j]), float(axes[2][k])), float(vals[i, j, k])


def brute_force_cut(sigma, n=41, box=((0.3, 0.7), (0.3, 0.7), (-0.4, 0.4)), normalized=False, gate=DEFAULT_GATE) -> CutParams:
    """Exhaustive grid minimiser of the ratio cut (independent test oracle)."""
    return brute_force_search(sigma, n, box, normalized, gate)[0]


def _newton(target: CutFunctional, x0, tol, max_iter):
    x = np.asarray(x0, dtype=float)
    f = float(target.values(x, check=True)[0])
    if not np.isfinite(f):
        raise GeometryError("seed cut is not admissible")
    lam = 0.0
    it = 0
    g = target.gradient(x)
    gnorm = float(np.linalg.norm(g))
    while gnorm > tol and it < max_iter:
        it += 1
        H = target.hessian(x)
        scale = max(1.0, float(np.max(np.abs(np.diag(H)))))
        accepted = False
        for _ in range(40):
            A = H + lam * scale * np.eye(3)
            try:
                np.linalg.cholesky(A)
            except np.linalg.LinAlgError:
                lam = max(2.0 * lam, 1e-4)
                continue
            step = -np.linalg.solve(A, g)
            xn = x + step
            fn = float(target.values(xn, check=True)[0])
            if np.isfinite(fn) and fn <= f + 1e-12 * abs(f):
                gn = target.gradient(xn)
                if fn < f or np.linalg.norm(gn) < gnorm:
                    x, f, g = xn, fn, gn
                    gnorm = float(np.linalg.norm(g))
                    lam = lam / 4.0 if lam > 1e-8 else 0.0
                    accepted = True
                    break
            lam = max(2.0 * lam, 1e-4)
        if not accepted:
            break
    return x, it, gnorm


def optimize_cut(
    sigma,
    tol: float = GRAD_TOL,
    max_iter: int = 50,
    seed=None,
    normalized: bool = False,
    gate: float | None = DEFAULT_GATE,
    fallback_n: int = 21,
) -> OptimizeReport:
    """Damped Newton minimisation of the ratio cut.

    Seeded at the series predictor (or ``seed``); if that fails, restarted
    from the best point of a ``fallback_n``-cubed grid.
    """
    target = _target(sigma, normalized, gate)
    seeds = [CutParams.from_array(seed) if seed is not None and not isinstance(seed, CutParams) else seed]
    if seeds[0] is None:
        seeds = [target.seed_cut()]
    last_error = None
    for attempt in range(2):
        if attempt == 1:
            box = FALLBACK_BOX
            qs = np.linspace(*box[0], fallback_n)
            ps = np.linspace(*box[1], fallback_n)
            ts = np.linspace(*box[2], fallback_n)
            # the box is given as fractions of the bottom and top curve intervals
            (ql, qh), (pl, ph) = target.q_bounds, target.p_bounds
            qs = ql + qs * (qh - ql)
            ps = pl + ps * (ph - pl)
            vals = grid_values(target, qs, ps, ts)
            if not np.isfinite(vals).any():
                break
            i, j, k = np.unravel_index(int(np.argmin(vals)), vals.shape)
            seeds.append(CutParams(float(qs[i]), float(ps[j]), float(ts[k])))
        s = seeds[-1]
        try:
            x, it, gnorm = _newton(target, s.as_array(), tol, max_iter)
        except GeometryError as exc:
            last_error = exc
            continue
        H = target.hessian(x)
        psd = bool(np.all(np.linalg.eigvalsh((H + H.T) / 2.0) > 0))
        if gnorm <= tol and psd:
            cut = CutParams.from_array(x)
            return OptimizeReport(cut, target.breakdown(cut), it, gnorm, psd, s, attempt == 1, H)
        last_error = ConvergenceError(
            f"Newton stopped at gradient norm {gnorm:.3g} (Hessian positive definite: {psd})",
            report={"cut": x.tolist(), "gradient_norm": gnorm, "hessian_psd": psd, "iterations": it},
        )
    if isinstance(last_error, ConvergenceError):
        raise last_error
    raise ConvergenceError(f"optimizer failed: {last_error}")
