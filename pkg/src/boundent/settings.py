"""Local measurement settings on three qubits.

A setting names one axis per qubit. Each site outcome bit is 0 for the +1
eigenvalue and 1 for -1; the joint outcome index is ``4*b0 + 2*b1 + b2``,
so for ``zzz`` the outcome index coincides with the basis-state index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .qmat import I2, SX, SY, SZ, kron_all

AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
    "x+y": (1 / math.sqrt(2), 1 / math.sqrt(2), 0.0),
    "x-y": (1 / math.sqrt(2), -1 / math.sqrt(2), 0.0),
}

PAULI_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class MeasSetting:
    axes: tuple[str, str, str]

    def __post_init__(self):
        axes = tuple(self.axes)
        if len(axes) != 3 or any(a not in AXES for a in axes):
            raise ValueError(f"bad axes {axes!r}; each must be one of {sorted(AXES)}")
        object.__setattr__(self, "axes", axes)

    @property
    def label(self) -> str:
        if all(len(a) == 1 for a in self.axes):
            return "".join(self.axes)
        return ",".join(self.axes)

    @classmethod
    def parse(cls, label: str) -> "MeasSetting":
        if "," in label:
            return cls(tuple(label.split(",")))
        return cls(tuple(label))


def site_observable(axis: str) -> np.ndarray:
    nx, ny, nz = AXES[axis]
    return nx * SX + ny * SY + nz * SZ


def site_projectors(axis: str) -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto the +1 and -1 eigenspaces of the site observable."""
    obs = site_observable(axis)
    return (I2 + obs) / 2, (I2 - obs) / 2


def outcome_projectors(setting: MeasSetting) -> list[np.ndarray]:
    per_site = [site_projectors(a) for a in setting.axes]
    return [
        kron_all(per_site[q][bits[q]] for q in range(3))
        for bits in itertools.product((0, 1), repeat=3)
    ]


def observable(setting: MeasSetting) -> np.ndarray:
    return kron_all(site_observable(a) for a in setting.axes)


def parity_signs(n_sites: int = 3) -> np.ndarray:
    """(-1)^(number of -1 outcomes) for each joint outcome index."""
    return np.array([(-1) ** bin(o).count("1") for o in range(1 << n_sites)], dtype=float)


def outcome_probabilities(rho, setting: MeasSetting) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    probs = np.array([np.trace(P @ rho).real for P in outcome_projectors(setting)])
    return np.clip(probs, 0.0, None)


def tomography_settings() -> list[MeasSetting]:
    return [MeasSetting(ax) for ax in itertools.product(PAULI_AXES, repeat=3)]


WITNESS_SETTINGS = (
    MeasSetting(("z", "z", "z")),
    MeasSetting(("x", "x", "x")),
    MeasSetting(("x+y", "x+y", "x+y")),
    MeasSetting(("x-y", "x-y", "x-y")),
)
