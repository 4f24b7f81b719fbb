"""Finite-difference stencils with Richardson extrapolation.

Every routine takes a *batched* function ``f(X) -> values`` where ``X`` has
shape ``(n, d)``, so a whole stencil is evaluated in one call.
"""

from __future__ import annotations

import itertools

import numpy as np

# five-point central stencils on offsets -2..2, error O(h^4)
OFFSETS = np.arange(-2, 3)
WEIGHTS = {
    0: np.array([0.0, 0.0, 1.0, 0.0, 0.0]),
    1: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0,
    2: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
}


def richardson(values, ratio=2.0, order=4):
    """Combine estimates at steps h, h/ratio, h/ratio^2, ... whose error is
    a series in h^order, h^(order+2), ...  Returns the extrapolated value."""
    table = [np.asarray(v, dtype=float) for v in values]
    k = order
    while len(table) > 1:
        f = ratio**k
        table = [(f * table[i + 1] - table[i]) / (f - 1.0) for i in range(len(table) - 1)]
        k += 2
    return table[0]


def mixed_partial(f, x, orders, h, levels=2):
    """Mixed partial derivative of ``f`` at ``x``.

    ``orders`` gives the derivative order (0, 1 or 2) per coordinate; ``h``
    is a scalar or per-coordinate step.  The tensor-product stencil is
    evaluated at ``h, h/2, ...`` (``levels`` values) and extrapolated.
    """
    x = np.asarray(x, dtype=float)
    orders = np.asarray(orders, dtype=int)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    axes = [i for i in range(x.size) if orders[i] > 0]
    if not axes:
        return float(np.asarray(f(x[None, :]))[0])
    estimates = []
    for lev in range(levels):
        hl = h / 2.0**lev
        pts = []
        wts = []
        per_axis = [[(o, WEIGHTS[orders[a]][j]) for j, o in enumerate(OFFSETS) if WEIGHTS[orders[a]][j] != 0] for a in axes]
        for combo in itertools.product(*per_axis):
            p = x.copy()
            w = 1.0
            for a, (o, wj) in zip(axes, combo):
                p[a] += o * hl[a]
                w *= wj / hl[a] ** orders[a]
            pts.append(p)
            wts.append(w)
        vals = np.asarray(f(np.array(pts)), dtype=float)
        estimates.append(float(np.dot(wts, vals)))
    return float(richardson(estimates))


def gradient(f, x, h=1e-3, levels=2):
    x = np.asarray(x, dtype=float)
    d = x.size
    out = np.empty(d)
    for i in range(d):
        orders = np.zeros(d, dtype=int)
        orders[i] = 1
        out[i] = mixed_partial(f, x, orders, h, levels)
    return out


def hessian(f, x, h=1e-3, levels=2):
    x = np.asarray(x, dtype=float)
    d = x.size
    H = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            orders = np.zeros(d, dtype=int)
            orders[i] += 1
            orders[j] += 1
            H[i, j] = H[j, i] = mixed_partial(f, x, orders, h, levels)
    return H
