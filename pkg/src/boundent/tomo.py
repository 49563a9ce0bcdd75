"""Measurement layer: outcome probabilities, seeded shot sampling, linear inversion.

Every setting measures one axis per qubit; see ``settings`` for the
outcome indexing. Sampling uses the documented SplitMix64 stream from
``rng`` with seed ``seed + setting_index`` for each setting of a batch.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import MissingSetting
from .qmat import PAULI, as_matrix, eig_hermitian, kron_all, partial_transpose
from .rng import SplitMix64
from .settings import (
    WITNESS_SETTINGS, MeasSetting, outcome_probabilities, tomography_settings,
)


@dataclass(frozen=True)
class ShotData:
    setting: MeasSetting
    shots: int
    counts: tuple[int, ...]
    seed: int

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != 8 or min(counts) < 0:
            raise ValueError("counts must be 8 non-negative integers")
        if self.shots < 1 or sum(counts) != self.shots:
            raise ValueError(f"counts sum to {sum(counts)}, expected shots={self.shots}")
        object.__setattr__(self, "counts", counts)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array(self.counts, dtype=float) / self.shots

    def to_dict(self) -> dict:
        return {"axes": list(self.setting.axes), "shots": self.shots, "counts": list(self.counts), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "ShotData":
        return cls(MeasSetting(tuple(d["axes"])), int(d["shots"]), tuple(d["counts"]), int(d["seed"]))


def expectation(rho, setting: MeasSetting) -> np.ndarray:
    """Probabilities of the 8 joint outcomes."""
    probs = outcome_probabilities(as_matrix(rho), setting)
    return probs / probs.sum()


def sample(rho, setting: MeasSetting, shots: int, seed: int) -> ShotData:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    counts = SplitMix64(seed).multinomial(shots, expectation(rho, setting))
    return ShotData(setting, shots, tuple(counts), seed)


def exact_data(rho, settings: Sequence[MeasSetting]) -> list[tuple[MeasSetting, np.ndarray]]:
    """Exact frequencies in place of counts (the infinite-shot limit)."""
    return [(s, expectation(rho, s)) for s in settings]


def simulate(rho, settings: Sequence[MeasSetting], shots: int, seed: int) -> list[ShotData]:
    return [sample(rho, s, shots, seed + i) for i, s in enumerate(settings)]


def simulate_tomography(rho, shots: int, seed: int) -> list[ShotData]:
    return simulate(rho, tomography_settings(), shots, seed)


def simulate_witness(rho, shots: int, seed: int) -> list[ShotData]:
    return simulate(rho, WITNESS_SETTINGS, shots, seed)


def _as_freq_pairs(data) -> list[tuple[MeasSetting, np.ndarray]]:
    out = []
    for item in data:
        if isinstance(item, ShotData):
            out.append((item.setting, item.frequencies))
        else:
            setting, freq = item
            out.append((setting, np.asarray(freq, dtype=float)))
    return out


# -- linear inversion --------------------------------------------------------------

def marginal_moment(freq: np.ndarray, sites: Iterable[int]) -> float:
    """<prod_{q in sites} sigma_q> from joint outcome frequencies."""
    sites = list(sites)
    signs = np.array([(-1) ** sum((o >> (2 - q)) & 1 for q in sites) for o in range(8)])
    return float(signs @ freq)


_LABELS = ["".join(t) for t in itertools.product("0xyz", repeat=3)]
_BASIS = np.stack([kron_all(PAULI[ch] for ch in label) for label in _LABELS])
# for each label and each full setting: does the setting determine that label's moment?
_SETTINGS = tomography_settings()
_SITE_SIGNS = np.array([[(-1) ** ((o >> (2 - q)) & 1) for o in range(8)] for q in range(3)])


def _label_plan():
    plan = []
    for label in _LABELS:
        sites = [q for q in range(3) if label[q] != "0"]
        signs = np.prod([_SITE_SIGNS[q] for q in sites], axis=0) if sites else np.ones(8)
        members = [k for k, s in enumerate(_SETTINGS) if all(s.axes[q] == label[q] for q in sites)]
        plan.append((signs, members))
    return plan


_PLAN = _label_plan()


def _freq_table(data) -> np.ndarray:
    by_axes = {s.axes: f for s, f in _as_freq_pairs(data)}
    missing = [s.label for s in _SETTINGS if s.axes not in by_axes]
    if missing:
        raise MissingSetting(f"missing settings: {', '.join(missing)}")
    return np.stack([by_axes[s.axes] for s in _SETTINGS])  # (27, 8)


def _moments_vector(freqs: np.ndarray) -> np.ndarray:
    return np.array([float(np.mean(freqs[members] @ signs)) for signs, members in _PLAN])


def pauli_moments(data) -> dict[str, float]:
    """lambda_{ijk} for every label in {0,x,y,z}^3, averaging all consistent settings.

    A label with identity on some qubits is estimated from every setting
    that agrees with it on the remaining qubits, by marginalising counts.
    """
    return dict(zip(_LABELS, _moments_vector(_freq_table(data))))


def _rho_from_moments(lam: np.ndarray) -> np.ndarray:
    rho = np.tensordot(lam, _BASIS, axes=1) / 8
    return 0.5 * (rho + rho.conj().T)


def reconstruct(data, *, project: bool = False) -> np.ndarray:
    """rho = (1/8) sum lambda_{ijk} s_i s_j s_k over the 64 Pauli labels."""
    rho = _rho_from_moments(_moments_vector(_freq_table(data)))
    return project_psd(rho) if project else rho


def project_psd(rho) -> np.ndarray:
    """Clip negative eigenvalues to zero and renormalise."""
    spec = eig_hermitian(rho)
    w = np.clip(spec.eigenvalues, 0.0, None)
    v = spec.eigenvectors
    out = (v * w) @ v.conj().T
    return out / np.trace(out).real


# -- witness estimate ------------------------------------------------------------------

def witness_from_counts(data, p, epsilon: float) -> float:
    """Estimate tr(W rho) from the four witness settings."""
    from .witness import pauli_settings

    by_axes = {s.axes: f for s, f in _as_freq_pairs(data)}
    total = 0.0
    for term in pauli_settings(p, epsilon):
        if term.setting.axes not in by_axes:
            raise MissingSetting(f"missing witness setting {term.setting.label}")
        total += float(term.coefficients @ by_axes[term.setting.axes])
    return total


# -- bootstrap -----------------------------------------------------------------------

def bootstrap_pt_min(data: Sequence[ShotData], cut: int, *, n_resamples: int = 200, seed: int = 0,
                     level: float = 0.95) -> tuple[float, float]:
    """Basic bootstrap interval for the minimum eigenvalue of rho^{T_cut}.

    Each resample redraws every setting's counts from its empirical
    frequencies. These draws use numpy's seeded generator: the bootstrap
    is an analysis step, not part of the reproducible shot record.

    The smallest eigenvalue of a noisy estimate is biased low, strongly so
    when the true minimum is degenerate. The basic (reverse percentile)
    interval [2t - q_hi, 2t - q_lo] corrects that bias to first order,
    where the plain percentile interval would inherit it.
    """
    freqs = _freq_table(data)
    shots = {d.setting.axes: d.shots for d in data}
    point = eig_hermitian(partial_transpose(_rho_from_moments(_moments_vector(freqs)), cut), vectors=False).min
    gen = np.random.default_rng(seed)
    draws = np.stack([
        gen.multinomial(shots[s.axes], freqs[k] / freqs[k].sum(), size=n_resamples) / shots[s.axes]
        for k, s in enumerate(_SETTINGS)
    ], axis=1)  # (n_resamples, 27, 8)
    mins = np.empty(n_resamples)
    for r in range(n_resamples):
        rho = _rho_from_moments(_moments_vector(draws[r]))
        mins[r] = eig_hermitian(partial_transpose(rho, cut), vectors=False).min
    tail = (1 - level) / 2
    q_lo, q_hi = np.quantile(mins, tail), np.quantile(mins, 1 - tail)
    return float(2 * point - q_hi), float(2 * point - q_lo)


# -- JSON lines ------------------------------------------------------------------------

def dump_shots(data: Iterable[ShotData]) -> str:
    return "".join(json.dumps(d.to_dict()) + "\n" for d in data)


def load_shots(text: str) -> list[ShotData]:
    return [ShotData.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]
