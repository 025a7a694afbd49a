"""Seeded 64-bit linear congruential generator for reproducible sample points.

state <- (A * state + C) mod 2^64, with Knuth's MMIX constants.  A uniform
draw in [0, 1) takes the top 53 bits of the new state.  The stream depends
only on the seed, so sample sets agree across platforms.
"""

from __future__ import annotations

import math

import numpy as np

A = 6364136223846793005
C = 1442695040888963407
MASK = (1 << 64) - 1

DEFAULT_SEED = 20240601
# sample domain for identity spot checks
SAMPLE_X = (-5.0, 5.0)
SAMPLE_Y = (0.05, 20.0)


class Lcg64:
    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = int(seed) & MASK

    def next_u64(self) -> int:
        self.state = (A * self.state + C) & MASK
        return self.state

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0 ** -53
        return lo + (hi - lo) * u

    def log_uniform(self, lo: float, hi: float) -> float:
        return math.exp(self.uniform(math.log(lo), math.log(hi)))


def sample_points(seed: int, n: int, x_range=SAMPLE_X, y_range=SAMPLE_Y) -> np.ndarray:
    """n complex points: x uniform on x_range, y log-uniform on y_range."""
    g = Lcg64(seed)
    out = np.empty(n, dtype=complex)
    for k in range(n):
        x = g.uniform(*x_range)
        y = g.log_uniform(*y_range)
        out[k] = complex(x, y)
    return out
