"""Entanglement witness W = Wbar - eps*I for the ABLS family.

Wbar is assembled from kernel projectors of the state and of its three
partial transposes, so tr(Wbar rho) = 0 and tr(W rho) = -eps. The shift
eps is the minimum of <efg|Wbar|efg> over product vectors, which makes W
non-negative on every separable state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, ConsistencyError
from .optimize import nelder_mead_batch
from .qmat import eig_hermitian, partial_transpose, projector
from .settings import WITNESS_SETTINGS, MeasSetting, outcome_projectors, parity_signs
from .states import ABLSParams, abls_direct

KERNEL_TOL = 1e-10
TIE_TOL = 1e-12
N_PROBES = 10**6


def _abc(p) -> tuple[float, float, float]:
    if isinstance(p, ABLSParams):
        return p.a, p.b, p.c
    a, b, c = (float(x) for x in p)
    if min(a, b, c) <= 0 or not all(map(math.isfinite, (a, b, c))):
        raise BadParams(f"a,b,c > 0 violated: {(a, b, c)}")
    return a, b, c


def kernel_projector(m, tol: float = KERNEL_TOL) -> np.ndarray:
    spec = eig_hermitian(m)
    cols = spec.eigenvectors[:, spec.eigenvalues <= tol]
    return cols @ cols.conj().T


def wbar_generic(rho) -> np.ndarray:
    """P + sum_X Q_X^{T_X} from the kernels of rho and of rho^{T_X}."""
    rho = np.asarray(rho, dtype=complex)
    w = kernel_projector(rho)
    for cut in range(3):
        w = w + partial_transpose(kernel_projector(partial_transpose(rho, cut)), cut)
    return 0.5 * (w + w.conj().T)


def coherence(p) -> float:
    """Magnitude of the |000><111| entry of Wbar."""
    a, b, c = _abc(p)
    return 0.5 + c / (1 + c * c) + b / (1 + b * b) + a / (1 + a * a)


def wbar_diagonal(p) -> np.ndarray:
    a, b, c = _abc(p)
    d = np.empty(8)
    d[0b000] = d[0b111] = 0.5
    d[0b100] = c * c / (1 + c * c)
    d[0b011] = 1 / (1 + c * c)
    d[0b010] = 1 / (1 + b * b)
    d[0b101] = b * b / (1 + b * b)
    d[0b001] = 1 / (1 + a * a)
    d[0b110] = a * a / (1 + a * a)
    return d


def wbar_explicit(p) -> np.ndarray:
    """Closed form of Wbar; ``p`` is ABLSParams or any positive (a, b, c)."""
    w = np.diag(wbar_diagonal(p)).astype(complex)
    k = coherence(p)
    w[0, 7] = w[7, 0] = -k
    return w


def witness_operator(p, epsilon: float) -> np.ndarray:
    return wbar_explicit(p) - epsilon * np.eye(8)


# -- product-vector objective ---------------------------------------------------

def product_vector(angles, phases=(0.0, 0.0, 0.0)) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for th, ph in zip(angles, phases):
        out = np.kron(out, [math.cos(th), math.sin(th) * np.exp(1j * ph)])
    return out


def epsilon_objective(p, angles) -> np.ndarray | float:
    """<efg|Wbar|efg> for real |e> = cos(t)|0> + sin(t)|1>; vectorised over trailing axes."""
    th = np.asarray(angles, dtype=float)
    scalar = th.ndim == 1
    th = th.reshape(3, -1)
    c, s = np.cos(th), np.sin(th)
    amp2 = np.stack([c * c, s * s], axis=1)  # (3, 2, m)
    d = wbar_diagonal(p)
    val = np.zeros(th.shape[1])
    for idx in range(8):
        bits = ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
        val += d[idx] * amp2[0, bits[0]] * amp2[1, bits[1]] * amp2[2, bits[2]]
    val -= 2 * coherence(p) * np.prod(c * s, axis=0)
    return float(val[0]) if scalar else val


def canonical_angles(angles) -> tuple[float, float, float]:
    """Representative of the symmetry class of ``angles`` under which the objective is invariant.

    The objective is unchanged by t -> t + pi on any angle and by
    t -> pi - t on any two angles together.
    """
    th = np.mod(np.asarray(angles, dtype=float), math.pi)
    th[np.isclose(th, math.pi, rtol=0, atol=1e-15)] = 0.0
    options = [tuple(th)]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        t = th.copy()
        t[[i, j]] = np.mod(math.pi - t[[i, j]], math.pi)
        options.append(tuple(t))
    return tuple(float(x) for x in min(options))


@dataclass(frozen=True)
class EpsilonResult:
    epsilon: float
    angles: tuple[float, float, float]
    probe_min: float
    n_starts: int


def _pick(values: np.ndarray, points: np.ndarray) -> tuple[float, np.ndarray]:
    """Minimum value; among near-ties the lexicographically smallest canonical point."""
    best = float(values.min())
    cands = sorted(canonical_angles(points[i]) for i in np.flatnonzero(values <= best + TIE_TOL))
    return best, np.array(cands[0])


def epsilon_min(p, *, seed: int = 0, n_random: int = 64, n_probes: int = N_PROBES) -> EpsilonResult:
    """Minimum of the product-vector objective by batched multi-start Nelder-Mead.

    Starts: a 4x4x4 lattice at (k + 1/2) pi/4 plus ``n_random`` seeded
    uniform points. The result is checked against ``n_probes`` random
    angles and the eight basis corners; whichever is lowest is returned.
    """
    rng = np.random.default_rng(seed)
    grid = (np.arange(4) + 0.5) * math.pi / 4
    lattice = np.array(list(itertools.product(grid, repeat=3)))
    starts = np.vstack([lattice, rng.uniform(0, math.pi, size=(n_random, 3))])
    res = nelder_mead_batch(lambda x: epsilon_objective(p, x), starts, step=0.2)

    corners = np.array(list(itertools.product((0.0, math.pi / 2), repeat=3)))
    corner_vals = epsilon_objective(p, corners.T)
    points = np.vstack([res.x, corners])
    values = np.concatenate([res.fun, corner_vals])

    probe_min = math.inf
    if n_probes:
        chunk = 250_000
        for lo in range(0, n_probes, chunk):
            pts = rng.uniform(0, math.pi, size=(min(chunk, n_probes - lo), 3))
            vals = epsilon_objective(p, pts.T)
            k = int(np.argmin(vals))
            if vals[k] < probe_min:
                probe_min = float(vals[k])
                probe_pt = pts[k]
        if probe_min < values.min() - TIE_TOL:
            # a probe beat every start; polish it and keep the better point
            pol = nelder_mead_batch(lambda x: epsilon_objective(p, x), probe_pt[None, :], step=0.05)
            points = np.vstack([points, pol.x])
            values = np.concatenate([values, pol.fun])
    eps, ang = _pick(values, points)
    return EpsilonResult(eps, tuple(float(x) for x in ang), probe_min, len(starts))


def symmetric_minimum(p) -> tuple[float, float]:
    """Minimum of the objective restricted to equal angles, and its angle."""
    t = np.linspace(0, math.pi, 4001, endpoint=False)
    vals = epsilon_objective(p, np.vstack([t, t, t]))
    t0 = t[int(np.argmin(vals))]
    res = nelder_mead_batch(lambda x: epsilon_objective(p, np.vstack([x[0]] * 3)), [[t0]], step=1e-3)
    return float(res.fun[0]), float(np.mod(res.x[0, 0], math.pi))


def corner_minimum(p) -> float:
    corners = np.array(list(itertools.product((0.0, math.pi / 2), repeat=3)))
    return float(np.min(epsilon_objective(p, corners.T)))


def branch(p) -> str:
    """Which candidate attains the minimum: a basis corner or the equal-angle curve."""
    return "corner" if corner_minimum(p) <= symmetric_minimum(p)[0] + TIE_TOL else "symmetric"


# -- evaluation ----------------------------------------------------------------

def witness_value(p: ABLSParams, rho=None, epsilon: float | None = None) -> float:
    """tr[(Wbar - eps I) rho]; ``rho`` defaults to the matching ABLS state."""
    if not isinstance(p, ABLSParams):
        raise BadParams("witness_value needs ABLSParams")
    if epsilon is None:
        epsilon = epsilon_min(p).epsilon
    rho = abls_direct(p) if rho is None else np.asarray(rho, dtype=complex)
    return float(np.trace(witness_operator(p, epsilon) @ rho).real)


def noise_threshold(epsilon: float) -> float:
    """Smallest mixing weight p with tr(W rho_p) < 0 for rho_p = p rho + (1-p) I/8.

    tr(W rho) = -eps and tr(W I/8) = tr(Wbar)/8 - eps = 1/2 - eps.
    """
    return 1 - 2 * epsilon


def noise_threshold_search(p: ABLSParams, epsilon: float, tol: float = 1e-12) -> float:
    """Bisection on the sign of tr(W rho_p), independent of the closed form."""
    w = witness_operator(p, epsilon)
    rho = abls_direct(p)
    mixed = np.eye(8) / 8

    def f(x):
        return float(np.trace(w @ (x * rho + (1 - x) * mixed)).real)

    lo, hi = 0.0, 1.0
    if f(hi) >= 0:
        return 1.0
    if f(lo) < 0:
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# -- local decomposition -------------------------------------------------------

@dataclass(frozen=True)
class SettingTerm:
    """W restricted to one setting: sum over outcomes of coefficient * outcome projector."""

    setting: MeasSetting
    coefficients: np.ndarray  # (8,) indexed by joint outcome


def pauli_settings(p, epsilon: float) -> list[SettingTerm]:
    """Four settings whose outcome-weighted projectors sum to W.

    The diagonal part (including -eps I) is read from sigma_z on every qubit.
    The coherence |000><111| + h.c. equals
    (1/2) X^3 - (1/(2 sqrt 2)) (S+^3 + S-^3) with S+- = (X +- Y)/sqrt 2,
    and each of those observables is a parity of its outcomes.
    """
    k = coherence(p)
    par = parity_signs()
    coeffs = [
        wbar_diagonal(p) - epsilon,
        -k * 0.5 * par,
        k / (2 * math.sqrt(2)) * par,
        k / (2 * math.sqrt(2)) * par,
    ]
    terms = [SettingTerm(s, c) for s, c in zip(WITNESS_SETTINGS, coeffs)]
    assert len(terms) == 4
    return terms


def reassemble(terms) -> np.ndarray:
    out = np.zeros((8, 8), dtype=complex)
    for t in terms:
        for c, proj in zip(t.coefficients, outcome_projectors(t.setting)):
            out += c * proj
    return out


# |000><111| + h.c. as Pauli strings
GHZ_COHERENCE_PAULI = ((0.25, "xxx"), (-0.25, "xyy"), (-0.25, "yxy"), (-0.25, "yyx"))


def pauli_string(label: str) -> np.ndarray:
    from .qmat import PAULI, kron_all

    return kron_all(PAULI[ch] for ch in label)


def coherence_from_pauli_strings() -> np.ndarray:
    return sum(w * pauli_string(lbl) for w, lbl in GHZ_COHERENCE_PAULI)


# -- report ----------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    params: ABLSParams
    epsilon: float
    minimizer_angles: tuple[float, float, float]
    witness_value: float
    noise_threshold: float
    n_settings: int = 4

    def to_dict(self) -> dict:
        return {
            "params": {"a": self.params.a, "b": self.params.b, "c": self.params.c},
            "epsilon": self.epsilon,
            "minimizer_angles": list(self.minimizer_angles),
            "witness_value": self.witness_value,
            "noise_threshold": self.noise_threshold,
            "n_settings": self.n_settings,
        }


def witness_report(p: ABLSParams, rho=None, *, seed: int = 0, n_probes: int = N_PROBES) -> WitnessReport:
    res = epsilon_min(p, seed=seed, n_probes=n_probes)
    if res.epsilon <= 0:
        raise ConsistencyError(f"non-positive eps {res.epsilon:.3g}")
    value = witness_value(p, rho, res.epsilon)
    p_star = noise_threshold(res.epsilon)
    if abs(p_star - noise_threshold_search(p, res.epsilon)) > 1e-6:
        raise ConsistencyError("noise threshold disagrees with bisection")
    return WitnessReport(p, res.epsilon, res.angles, value, p_star, len(pauli_settings(p, res.epsilon)))
