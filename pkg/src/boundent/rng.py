"""SplitMix64, written out so that counts are reproducible bit for bit.

Output i (i = 0, 1, ...) of the stream with seed s is mix(s + (i+1)*G mod 2^64)
with G = 0x9E3779B97F4A7C15 and

    mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
            z ^= z >> 27; z *= 0x94D049BB133111EB
            z ^= z >> 31                       (all mod 2^64)

A uniform double in [0, 1) is (output >> 11) * 2^-53.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """Scalar reference implementation of the finaliser."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.counter = 0

    def next_uint64(self, n: int) -> np.ndarray:
        i = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + i * np.uint64(GOLDEN)
            return _mix_array(z)

    def uniform(self, n: int) -> np.ndarray:
        return (self.next_uint64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def multinomial(self, shots: int, probs) -> np.ndarray:
        """Counts of ``shots`` categorical draws by inverse-CDF lookup."""
        probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
        cdf = np.cumsum(probs / probs.sum())
        idx = np.searchsorted(cdf, self.uniform(shots), side="right")
        return np.bincount(np.minimum(idx, probs.size - 1), minlength=probs.size)
