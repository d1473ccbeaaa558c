"""SplitMix64 stream with Box-Muller normals.

The stream is fully specified so other implementations can reproduce it:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)                      (all arithmetic mod 2**64)

uniform() = (out >> 11) * 2**-53, in [0, 1).
normal_pair() draws u1, u2 and returns r cos(2π u2), r sin(2π u2) with
r = sqrt(-2 ln(1 - u1)).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .linalg import PauliAxis, StateVector

_MASK = (1 << 64) - 1
DEFAULT_SEED = 42


class SplitMix64:
    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0**-53
        return low + (high - low) * u

    def normal_pair(self) -> tuple[float, float]:
        u1, u2 = self.uniform(), self.uniform()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        return r * math.cos(2 * math.pi * u2), r * math.sin(2 * math.pi * u2)

    def random_state(self, labels: Sequence[str]) -> StateVector:
        """Haar-random pure state: one normal pair (re, im) per amplitude."""
        amps = np.empty(2 ** len(labels), dtype=complex)
        for i in range(amps.size):
            re, im = self.normal_pair()
            amps[i] = complex(re, im)
        return StateVector(tuple(labels), amps).normalized()

    def random_axis(self) -> PauliAxis:
        x, y = self.normal_pair()
        z, _ = self.normal_pair()
        return PauliAxis.normalize(x, y, z)
