"""Multi-start Nelder-Mead, vectorised across starts.

All simplices advance in lock step; the objective receives a ``(d, m)``
array of ``m`` points and returns ``m`` values. Converged simplices are
frozen so the result of each start matches what a serial run would give.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALPHA, GAMMA, RHO, SIGMA = 1.0, 2.0, 0.5, 0.5


@dataclass
class BatchResult:
    x: np.ndarray  # (m, d) best vertex of each simplex
    fun: np.ndarray  # (m,)
    n_iter: int
    converged: np.ndarray  # (m,) bool


def nelder_mead_batch(f, x0, *, step: float = 0.1, xatol: float = 1e-10, fatol: float = 1e-14,
                      max_iter: int = 5000) -> BatchResult:
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    m, d = x0.shape
    # simplex[v] is (m, d): vertex v of every simplex
    simplex = np.repeat(x0[None, :, :], d + 1, axis=0)
    for k in range(d):
        simplex[k + 1, :, k] += step
    fvals = np.stack([f(simplex[v].T) for v in range(d + 1)])
    active = np.ones(m, dtype=bool)
    it = 0
    rows = np.arange(m)
    for it in range(1, max_iter + 1):
        order = np.argsort(fvals, axis=0, kind="stable")
        simplex = simplex[order, rows[None, :], :]
        fvals = fvals[order, rows[None, :]]
        spread_x = np.max(np.abs(simplex[1:] - simplex[0]), axis=(0, 2))
        spread_f = np.max(np.abs(fvals[1:] - fvals[0]), axis=0)
        active &= ~((spread_x <= xatol) & (spread_f <= fatol))
        if not active.any():
            break
        idx = np.flatnonzero(active)
        s = simplex[:, idx, :]
        fv = fvals[:, idx]
        best, worst = s[0], s[-1]
        f_best, f_second, f_worst = fv[0], fv[-2], fv[-1]
        centroid = s[:-1].mean(axis=0)

        xr = centroid + ALPHA * (centroid - worst)
        fr = f(xr.T)
        xe = centroid + GAMMA * (xr - centroid)
        fe = f(xe.T)
        xoc = centroid + RHO * (xr - centroid)
        foc = f(xoc.T)
        xic = centroid + RHO * (worst - centroid)
        fic = f(xic.T)

        new_x = worst.copy()
        new_f = f_worst.copy()

        expand = fr < f_best
        use_e = expand & (fe < fr)
        use_r = (expand & ~use_e) | ((fr >= f_best) & (fr < f_second))
        outside = (fr >= f_second) & (fr < f_worst)
        inside = fr >= f_worst
        use_oc = outside & (foc <= fr)
        use_ic = inside & (fic < f_worst)
        shrink = (outside & ~use_oc) | (inside & ~use_ic)

        for mask, xs, fs in ((use_e, xe, fe), (use_r, xr, fr), (use_oc, xoc, foc), (use_ic, xic, fic)):
            new_x[mask] = xs[mask]
            new_f[mask] = fs[mask]
        s[-1] = new_x
        fv[-1] = new_f
        if shrink.any():
            sh = np.flatnonzero(shrink)
            for v in range(1, d + 1):
                s[v, sh] = best[sh] + SIGMA * (s[v, sh] - best[sh])
                fv[v, sh] = f(s[v, sh].T)
        simplex[:, idx, :] = s
        fvals[:, idx] = fv
    order = np.argsort(fvals, axis=0, kind="stable")
    simplex = simplex[order, rows[None, :], :]
    fvals = fvals[order, rows[None, :]]
    return BatchResult(simplex[0].copy(), fvals[0].copy(), it, ~active)
