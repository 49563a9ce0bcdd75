"""Eigenvalues of a PSD matrix from its power sums.

Newton's identities turn the power sums p_1..p_n into the elementary
symmetric polynomials e_1..e_n, i.e. the characteristic polynomial.
Its roots are all real (they are eigenvalues of a Hermitian matrix), so
they can be bracketed without complex arithmetic: the roots of each
derivative separate the roots of the level above (Rolle), and we walk
down from the linear n-1st derivative to the polynomial itself.

Coefficients are held as exact fractions of the input floats, so the
only error is that of the inputs. That input error is propagated into a
per-coefficient noise bound; a bracket point where the polynomial is
smaller than its noise bound is taken as a (multiple) root.

A root of multiplicity m moves by delta^(1/m) under a perturbation delta,
so the bracketed roots are only a starting point. The final answer comes
from choosing a multiplicity pattern (a split of the sorted roots into
runs) and fitting one value per run to the power sums by least squares,
which is well conditioned once the multiplicities are fixed. The
coarsest pattern that reproduces every p_k to FIT_REL_TOL wins.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import IllConditioned

INPUT_REL_ERROR = Fraction(1, 10**14)
FIT_REL_TOL = 1e-14
LOWER, UPPER = -1e-6, 1 + 1e-6
BISECT_STEPS = 200


def elementary_symmetric(power_sums: Sequence[float]) -> list[Fraction]:
    """e_0..e_n from p_1..p_n: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i."""
    p = [Fraction(float(x)) for x in power_sums]
    e = [Fraction(1)]
    for k in range(1, len(p) + 1):
        e.append(sum((-1) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1)) / k)
    return e


def _noise(power_sums, e, eta: Fraction) -> list[Fraction]:
    """First-order bound on |delta e_k| when each p_i carries relative error eta."""
    p = [abs(Fraction(float(x))) for x in power_sums]
    d = [Fraction(0)]
    for k in range(1, len(p) + 1):
        d.append(sum(d[k - i] * p[i - 1] + abs(e[k - i]) * eta * p[i - 1] for i in range(1, k + 1)) / k)
    return d


def char_poly(power_sums: Sequence[float]) -> list[Fraction]:
    """Monic characteristic polynomial, highest degree first."""
    e = elementary_symmetric(power_sums)
    return [(-1) ** k * e[k] for k in range(len(e))]


def _val(c, x) -> Fraction:
    x = Fraction(x)
    r = Fraction(0)
    for a in c:
        r = r * x + a
    return r


def _absval(c, x) -> Fraction:
    x = abs(Fraction(x))
    r = Fraction(0)
    for a in c:
        r = r * x + abs(a)
    return r


def _deriv(c):
    n = len(c) - 1
    return [a * (n - i) for i, a in enumerate(c[:-1])]


def _bisect(c, lo: float, hi: float) -> float:
    f_lo = _val(c, lo)
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = _val(c, mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots(power_sums: Sequence[float], *, lower: float = LOWER, upper: float = UPPER,
               eta: Fraction = INPUT_REL_ERROR) -> np.ndarray:
    """Roots of the characteristic polynomial in ``[lower, upper]``, descending."""
    n = len(power_sums)
    if n == 0:
        return np.zeros(0)
    e = elementary_symmetric(power_sums)
    coeffs = [(-1) ** k * e[k] for k in range(n + 1)]
    noise = _noise(power_sums, e, eta)
    levels, noise_levels = [coeffs], [noise]
    for _ in range(n - 1):
        levels.append(_deriv(levels[-1]))
        noise_levels.append(_deriv(noise_levels[-1]))
    lin = levels[-1]
    roots = [float(-lin[1] / lin[0])]
    for j in range(n - 2, -1, -1):
        c, nc = levels[j], noise_levels[j]
        flags = [abs(_val(c, x)) <= _absval(nc, x) for x in roots]
        pts = [lower] + roots + [upper]
        flagged = [False] + flags + [False]
        new = []
        for i in range(len(pts) - 1):
            lo, hi = pts[i], pts[i + 1]
            if flagged[i]:
                new.append(lo)
                continue
            if flagged[i + 1] or hi <= lo:
                new.append(hi if flagged[i + 1] else lo)
                continue
            f_lo, f_hi = _val(c, lo), _val(c, hi)
            if f_lo == 0 or f_hi == 0:
                new.append(lo if f_lo == 0 else hi)
            elif (f_lo > 0) != (f_hi > 0):
                new.append(_bisect(c, lo, hi))
            else:
                # no sign change: a root the noise has pushed off the axis, or one at the ends
                new.append(lo if abs(f_lo) <= abs(f_hi) else hi)
        roots = new
    return np.array(sorted(roots, reverse=True))


def _fit(p: np.ndarray, start: np.ndarray, mult: np.ndarray) -> tuple[np.ndarray, float]:
    k = np.arange(1, p.size + 1)[:, None]

    def resid(z):
        return (np.sum(mult * z[None, :] ** k, axis=1) - p) / p

    def jac(z):
        return mult * k * z[None, :] ** (k - 1) / p[:, None]

    sol = least_squares(resid, start, jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return sol.x, float(np.max(np.abs(resid(sol.x))))


def refine(power_sums: Sequence[float], roots: np.ndarray, tol: float = FIT_REL_TOL) -> np.ndarray | None:
    """Coarsest multiplicity pattern whose fitted values reproduce the power sums."""
    p = np.asarray(power_sums, dtype=float)
    r = np.sort(np.asarray(roots, dtype=float))
    n = r.size
    for n_runs in range(1, n + 1):
        best = None
        for cuts in itertools.combinations(range(1, n), n_runs - 1):
            edges = (0,) + cuts + (n,)
            runs = [r[edges[i]:edges[i + 1]] for i in range(n_runs)]
            mult = np.array([len(x) for x in runs], dtype=float)
            z, res = _fit(p, np.array([x.mean() for x in runs]), mult)
            if res <= tol and (best is None or res < best[2]):
                best = (z, mult.astype(int), res)
        if best is not None:
            return np.sort(np.repeat(best[0], best[1]))[::-1]
    return None


def spectrum_from_power_sums(power_sums: Sequence[float]) -> np.ndarray:
    """Eigenvalues from p_1..p_n of a PSD matrix with unit-scale spectrum.

    Raises IllConditioned when no multiplicity pattern reproduces the
    inputs or the values leave [LOWER, UPPER]; both are what complex
    roots (inputs not from a PSD matrix) look like on the real line.
    """
    p = np.asarray(power_sums, dtype=float)
    if p.size == 0:
        return np.zeros(0)
    if np.any(p <= 0):
        raise IllConditioned("power sums of a non-zero PSD matrix are positive")
    roots = refine(p, real_roots(p))
    if roots is None:
        raise IllConditioned("no root pattern reproduces the power sums")
    if roots.min() < LOWER or roots.max() > UPPER:
        raise IllConditioned(f"roots outside [{LOWER}, {UPPER}]")
    return roots
