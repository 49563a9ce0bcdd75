"""Dense complex linear algebra for small multi-qubit operators.

Matrices are plain ``numpy`` complex arrays. Qubit 0 is the leftmost ket
label, i.e. the most significant bit of a computational-basis index, so
``|q0 q1 q2>`` has index ``4*q0 + 2*q1 + q2``. Every module obeys this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import BadIndex, DimMismatch, NotDensityMatrix, NotHermitian

MAX_DIM = 512

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"0": I2, "x": SX, "y": SY, "z": SZ}


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order, optionally with eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    @property
    def min(self) -> float:
        return float(self.eigenvalues[-1])

    def reconstruct(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("spectrum carries no eigenvectors")
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def n_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise DimMismatch(f"dimension {dim} is not a power of two")
    return n


def density(m, *, tol_psd: float = PSD_TOL) -> np.ndarray:
    """Validate ``m`` as a density matrix and return it as a complex array."""
    a = as_matrix(m)
    n_qubits_of(a.shape[0])
    if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
        raise NotDensityMatrix("matrix is not Hermitian")
    tr = np.trace(a)
    if abs(tr - 1) > TRACE_TOL:
        raise NotDensityMatrix(f"trace {tr.real:.15g} differs from 1")
    if eig_hermitian(a, vectors=False).min < -tol_psd:
        raise NotDensityMatrix("matrix has a negative eigenvalue")
    return a


def pure_state(amps) -> np.ndarray:
    v = np.asarray(amps, dtype=complex).reshape(-1)
    n_qubits_of(v.size)
    if abs(np.linalg.norm(v) - 1) > 1e-12:
        raise NotDensityMatrix("state vector is not normalised")
    return v


def basis_state(bits: str) -> np.ndarray:
    """``basis_state("010")`` returns the ket |010>."""
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(ops: Iterable) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = kron(out, op)
    return out


def max_norm_distance(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def _round_robin(n: int):
    """Yield rounds of disjoint index pairs covering every pair once."""
    m = n + (n % 2)
    players = list(range(m))
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                pairs.append((min(p, q), max(p, q)))
        yield pairs
        players = [players[0]] + [players[-1]] + players[1:-1]


def eig_hermitian(m, *, vectors: bool = True, check: float = 1e-10) -> Spectrum:
    """Cyclic Jacobi eigensolver for a Hermitian matrix.

    Rotations are scheduled in round-robin order so each round acts on
    disjoint index pairs and can be applied as one vectorised update.
    Iteration stops when the off-diagonal Frobenius norm falls below
    ``JACOBI_TOL`` (relative to the matrix norm when that exceeds one).
    """
    a = as_matrix(m).copy()
    n = a.shape[0]
    if n > MAX_DIM:
        raise DimMismatch(f"dimension {n} exceeds {MAX_DIM}")
    if np.max(np.abs(a - a.conj().T)) > check:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex) if vectors else None
    rounds = [
        (np.array([p for p, _ in r], dtype=int), np.array([q for _, q in r], dtype=int))
        for r in _round_robin(n)
        if r
    ]
    scale = max(1.0, float(np.linalg.norm(a)))
    eye = np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a[~eye]))
        if off <= JACOBI_TOL * scale:
            break
        for P, Q in rounds:
            apq = a[P, Q]
            mag = np.abs(apq)
            live = mag > 1e-300
            if not np.any(live):
                continue
            P, Q, apq, mag = P[live], Q[live], apq[live], mag[live]
            app = a[P, P].real
            aqq = a[Q, Q].real
            phase = apq / mag
            tau = (aqq - app) / (2 * mag)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1 + tau * tau))
            c = 1 / np.sqrt(1 + t * t)
            s = t * c
            # 2x2 block on (p, q): [[c, s], [-s*conj(phase), c*conj(phase)]]
            gpp, gpq = c, s
            gqp, gqq = -s * phase.conj(), c * phase.conj()
            colp, colq = a[:, P].copy(), a[:, Q].copy()
            a[:, P] = colp * gpp + colq * gqp
            a[:, Q] = colp * gpq + colq * gqq
            rowp, rowq = a[P, :].copy(), a[Q, :].copy()
            a[P, :] = np.conj(gpp)[:, None] * rowp + np.conj(gqp)[:, None] * rowq
            a[Q, :] = np.conj(gpq)[:, None] * rowp + np.conj(gqq)[:, None] * rowq
            a[P, Q] = 0
            a[Q, P] = 0
            if v is not None:
                vp, vq = v[:, P].copy(), v[:, Q].copy()
                v[:, P] = vp * gpp + vq * gqp
                v[:, Q] = vp * gpq + vq * gqq
    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], None if v is None else v[:, order])


def eigvals(m) -> np.ndarray:
    return eig_hermitian(m, vectors=False).eigenvalues


def _check_qubits(n: int, qubits: Iterable[int]) -> list[int]:
    qs = [int(q) for q in qubits]
    for q in qs:
        if not 0 <= q < n:
            raise BadIndex(f"qubit {q} out of range for {n} qubits")
    return qs


def partial_trace(rho, keep: Iterable[int]) -> np.ndarray:
    """Reduced operator on the qubits in ``keep`` (returned in ascending order)."""
    a = as_matrix(rho)
    n = n_qubits_of(a.shape[0])
    keep = sorted(set(_check_qubits(n, keep)))
    if not keep:
        raise BadIndex("keep must name at least one qubit")
    t = a.reshape((2,) * (2 * n))
    traced = [q for q in range(n) if q not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for q in traced:
        cols[q] = rows[q]
    out = "".join(rows[q] for q in keep) + "".join(cols[q] for q in keep)
    k = len(keep)
    return np.einsum("".join(rows) + "".join(cols) + "->" + out, t).reshape(1 << k, 1 << k)


def partial_transpose(rho, cut: int | Iterable[int]) -> np.ndarray:
    """Transpose the indices of qubit ``cut`` (or of each qubit in a collection)."""
    a = as_matrix(rho)
    n = n_qubits_of(a.shape[0])
    cuts = [cut] if isinstance(cut, (int, np.integer)) else list(cut)
    cuts = _check_qubits(n, cuts)
    t = a.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for q in cuts:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return t.transpose(axes).reshape(a.shape)


def permute_qubits(rho, order: Iterable[int]) -> np.ndarray:
    """Reorder qubits: output qubit ``i`` is input qubit ``order[i]``."""
    a = as_matrix(rho)
    n = n_qubits_of(a.shape[0])
    order = _check_qubits(n, order)
    if sorted(order) != list(range(n)):
        raise BadIndex(f"{order} is not a permutation of range({n})")
    t = a.reshape((2,) * (2 * n))
    return t.transpose(order + [n + q for q in order]).reshape(a.shape)


def power_sums(eigenvalues, k_max: int) -> np.ndarray:
    w = np.asarray(eigenvalues, dtype=float)
    return np.array([np.sum(w**k) for k in range(1, k_max + 1)])
