"""Checks of positivity under partial transposition (PPT).

Three independent routes to the same verdict:

* the spectrum of rho^{T_X} computed directly;
* the structural physical approximation (SPA) of the transposition, a
  physical channel whose output spectrum is an affine image of the PT
  spectrum;
* power sums tr(rho^k), measurable by shift operators on k copies, from
  which Newton's identities recover the whole spectrum.

Cuts are named by the transposed party: "A", "B", "C" are qubits 0, 1, 2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadIndex, BadParams, NegativeProbability, TooLarge
from .qmat import (
    I2, SX, SY, SZ, Spectrum, as_matrix, eig_hermitian, kron_all, partial_trace,
    partial_transpose, permute_qubits,
)
from .realroots import spectrum_from_power_sums
from .states import DCTParams, dct_direct

PPT_TOL = 1e-10
CUTS = ("A", "B", "C")


def cut_index(cut) -> int:
    if isinstance(cut, str):
        if cut.upper() not in CUTS:
            raise BadIndex(f"cut must be one of {CUTS}, got {cut!r}")
        return CUTS.index(cut.upper())
    q = int(cut)
    if not 0 <= q < 3:
        raise BadIndex(f"cut {q} outside 0..2")
    return q


# -- direct PT spectra -----------------------------------------------------------

@dataclass(frozen=True)
class PTReport:
    cut: str
    spectrum: Spectrum
    is_ppt: bool
    min_eigenvalue: float

    def to_dict(self) -> dict:
        return {
            "cut": self.cut,
            "eigenvalues": [float(x) for x in self.spectrum.eigenvalues],
            "is_ppt": self.is_ppt,
            "min_eigenvalue": self.min_eigenvalue,
        }


def pt_spectrum(rho, cut) -> PTReport:
    q = cut_index(cut)
    spec = eig_hermitian(partial_transpose(as_matrix(rho), q), vectors=False)
    return PTReport(CUTS[q], spec, spec.min >= -PPT_TOL, spec.min)


def pt_reports(rho) -> list[PTReport]:
    return [pt_spectrum(rho, c) for c in CUTS]


def dct_sk_classify(p: DCTParams) -> dict[str, int]:
    """s_k = 1 iff lambda_k < Delta/2; s01 flags cut B, s10 cut A, s11 cut C."""
    if not isinstance(p, DCTParams):
        raise BadParams("dct_sk_classify needs DCTParams")
    half = p.delta / 2
    lam = p.lambdas
    return {k: int(lam[k] < half) for k in ("01", "10", "11")}


SK_CUT = {"10": "A", "01": "B", "11": "C"}


def dct_npt_cuts(p: DCTParams) -> set[str]:
    return {SK_CUT[k] for k, s in dct_sk_classify(p).items() if s}


# -- structural physical approximation -------------------------------------------

# swap that brings the transposed party to qubit 2; each is its own inverse
_TO_CANONICAL = {0: (2, 1, 0), 1: (0, 2, 1), 2: (0, 1, 2)}


def _canonical_spa_affine(rho: np.ndarray) -> np.ndarray:
    """Transpose qubit 2 through its SPA acting on qubits 1 and 2."""
    rest = partial_trace(rho, [0])
    return (8 / 9) * kron_all([rest, np.eye(4) / 4]) + partial_transpose(rho, 2) / 9


def spa_noise_term(rho, cut) -> np.ndarray:
    """rho of the untouched qubit tensored with I/4 on the other two, in original order."""
    q = cut_index(cut)
    order = _TO_CANONICAL[q]
    rest = partial_trace(as_matrix(rho), [order[0]])
    return permute_qubits(kron_all([rest, np.eye(4) / 4]), order)


def spa_affine(rho, cut) -> np.ndarray:
    """(8/9) rho_rest (x) I/4 + (1/9) rho^{T_cut}: the SPA as an explicit mixture."""
    q = cut_index(cut)
    order = _TO_CANONICAL[q]
    moved = permute_qubits(as_matrix(rho), order)
    return permute_qubits(_canonical_spa_affine(moved), order)


def _canonical_spa_kraus() -> list[np.ndarray]:
    # weight 2/3: (1/3 sum_i s_i . s_i) on qubit 1, full twirl on qubit 2
    # weight 1/3: identity on qubit 1, sx sz Lambda1 sz sx on qubit 2
    paulis = (SX, SY, SZ)
    ops = [
        math.sqrt(2 / 3) * kron_all([I2, a / math.sqrt(3), b / 2])
        for a in paulis
        for b in (I2, SX, SY, SZ)
    ]
    ops += [math.sqrt(1 / 3) * kron_all([I2, I2, SX @ SZ @ a / math.sqrt(3)]) for a in paulis]
    return ops


SPA_KRAUS = tuple(_canonical_spa_kraus())


def spa_kraus(rho, cut) -> np.ndarray:
    """The same SPA applied as an operator-sum channel."""
    q = cut_index(cut)
    order = _TO_CANONICAL[q]
    moved = permute_qubits(as_matrix(rho), order)
    out = sum(k @ moved @ k.conj().T for k in SPA_KRAUS)
    return permute_qubits(out, order)


@dataclass(frozen=True)
class SPAReport:
    cut: str
    min_eigenvalue: float
    pt_min_lower: float
    pt_min_upper: float
    pt_min_recovered: float

    def to_dict(self) -> dict:
        return {
            "cut": self.cut,
            "spa_min_eigenvalue": self.min_eigenvalue,
            "pt_min_lower": self.pt_min_lower,
            "pt_min_upper": self.pt_min_upper,
            "pt_min_recovered": self.pt_min_recovered,
        }


def spa_report(rho, cut) -> SPAReport:
    """Bounds on lambda_min(rho^T) from the SPA output.

    rho^T = 9 S - 8 M with M = rho_rest (x) I/4, so Weyl's inequalities give
    9 lmin(S) - 2 lmax(rho_rest) <= lmin(rho^T) <= 9 lmin(S) - 2 lmin(rho_rest).
    Knowing M exactly also lets us undo the mixture and read lmin(rho^T) off.
    """
    q = cut_index(cut)
    rho = as_matrix(rho)
    s = spa_affine(rho, q)
    s_min = eig_hermitian(s, vectors=False).min
    rest = eig_hermitian(partial_trace(rho, [_TO_CANONICAL[q][0]]), vectors=False).eigenvalues
    recovered = eig_hermitian(9 * s - 8 * spa_noise_term(rho, q), vectors=False).min
    return SPAReport(CUTS[q], s_min, 9 * s_min - 2 * rest.max(), 9 * s_min - 2 * rest.min(), recovered)


# -- power traces and shift operators ---------------------------------------------

@dataclass(frozen=True)
class PowerTraces:
    values: np.ndarray  # p_k = tr(rho^k), k = 1..K

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __getitem__(self, k: int) -> float:
        """p_k, 1-based."""
        if not 1 <= k <= self.values.size:
            raise BadIndex(f"k={k} outside 1..{self.values.size}")
        return float(self.values[k - 1])

    def __len__(self) -> int:
        return int(self.values.size)


def power_traces(rho, K: int = 8) -> PowerTraces:
    if K < 1:
        raise ValueError("K must be at least 1")
    m = as_matrix(rho)
    acc = np.eye(m.shape[0], dtype=complex)
    out = []
    for _ in range(K):
        acc = acc @ m
        out.append(np.trace(acc).real)
    return PowerTraces(np.array(out))


def spectrum_from_traces(traces: PowerTraces | np.ndarray) -> Spectrum:
    values = traces.values if isinstance(traces, PowerTraces) else np.asarray(traces, dtype=float)
    return Spectrum(spectrum_from_power_sums(values))


def shift_permutation(k: int, reversed_parties=(), n_parties: int = 3) -> np.ndarray:
    """Index map of V_A (x) V_B (x) V_C on k copies, copies stored one after another.

    V|phi_1 ... phi_k> = |phi_k phi_1 ... phi_{k-1}> on each party's k
    qubits; parties in ``reversed_parties`` shift the other way. Returns
    ``perm`` with V|x> = |perm[x]>.
    """
    n = n_parties * k
    rev = {cut_index(c) for c in reversed_parties}
    idx = np.arange(1 << n)
    bits = [(idx >> (n - 1 - pos)) & 1 for pos in range(n)]  # bits[copy*n_parties + party]
    out = np.zeros_like(idx)
    for copy in range(k):
        for party in range(n_parties):
            src = copy * n_parties + party
            dst_copy = (copy - 1) % k if party in rev else (copy + 1) % k
            dst = dst_copy * n_parties + party
            out |= bits[src] << (n - 1 - dst)
    return out


def shift_operator(k: int, reversed_parties=()) -> np.ndarray:
    perm = shift_permutation(k, reversed_parties)
    v = np.zeros((perm.size, perm.size))
    v[perm, np.arange(perm.size)] = 1
    return v


def shift_operator_check(rho, k: int, reversed_parties=()) -> float:
    """Re tr[rho^{(x)k} (V_A (x) V_B (x) V_C)] with the explicit permutation operator."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > 3:
        raise TooLarge(f"k={k}: the {8**k}-dimensional copy space is beyond the dense limit")
    m = as_matrix(rho)
    big = kron_all([m] * k)
    return float(np.trace(big @ shift_operator(k, reversed_parties)).real)


def _reduced_traces(rho, k: int) -> dict[tuple[int, ...], float]:
    m = as_matrix(rho)
    out = {(): 1.0}
    for r in (1, 2, 3):
        for sub in itertools.combinations(range(3), r):
            red = m if r == 3 else partial_trace(m, sub)
            out[sub] = float(np.trace(np.linalg.matrix_power(red, k)).real)
    return out


def probs_from_traces(rho, k: int) -> np.ndarray:
    """Outcome probabilities P_ijl of the three-party shift-operator test.

    P_ijl = (1/8) sum over subsets S of {A,B,C} of (-1)^(sum of the bits of S) tr(rho_S^k);
    returned as an array indexed by 4i + 2j + l.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    tr = _reduced_traces(rho, k)
    probs = np.zeros(8)
    for i, j, l in itertools.product((0, 1), repeat=3):
        bits = (i, j, l)
        probs[4 * i + 2 * j + l] = sum(
            (-1) ** sum(bits[q] for q in sub) * val for sub, val in tr.items()
        ) / 8
    if probs.min() < -PPT_TOL:
        raise NegativeProbability(f"P = {probs.min():.3g} < 0 at k={k}")
    return probs


def signed_sum(probs) -> float:
    """sum_ijl (-1)^(i+j+l) P_ijl, which returns tr(rho_ABC^k)."""
    probs = np.asarray(probs, dtype=float)
    signs = np.array([(-1) ** bin(o).count("1") for o in range(8)])
    return float(signs @ probs)


def dct_consistent(p: DCTParams, reports=None) -> bool:
    """The s_k prediction of NPT cuts agrees with the computed PT spectra."""
    reports = reports if reports is not None else pt_reports(dct_direct(p))
    return dct_npt_cuts(p) == {r.cut for r in reports if not r.is_ppt}
