"""Deterministic 64-bit PRNG for reproducible experiments.

The generator is SplitMix64.  Its entire state is one 64-bit word with the
transition

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64

and output scrambler

    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9  (mod 2^64)
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB  (mod 2^64)
    z <- z XOR (z >> 31).

Uniform doubles are ((z >> 11) + 1) * 2^-53 in (0, 1]; Gaussians come from
the Box-Muller transform.  Identical seeds give identical integer streams on
any platform; the derived doubles are bit-exact wherever libm's log/cos/sin
are correctly rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgs

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class RngSpec:
    """Seed plus the (fixed) algorithm tag of the experiment PRNG."""

    seed: int
    algorithm: str = "splitmix64"


def _scramble(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Stateful SplitMix64 stream (see module docstring for the transition)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return _scramble(self.state)

    def random(self) -> float:
        """Uniform double in (0, 1]."""
        return ((self.next_u64() >> 11) + 1) * 2.0**-53

    def gauss_pair(self) -> tuple[float, float]:
        """Two independent standard normals via Box-Muller."""
        u1 = self.random()
        u2 = ((self.next_u64() >> 11)) * 2.0**-53  # in [0, 1)
        r = math.sqrt(-2.0 * math.log(u1))
        return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


def derive_seed(master: int, *parts: int) -> int:
    """Collision-resistant per-task seed from a master seed and indices.

    Each part is folded in as one scrambled SplitMix64 step, so streams for
    different (part...) tuples are independent and schedule-free.
    """
    s = _scramble(int(master) & _MASK)
    for p in parts:
        s = _scramble((s + (int(p) + 1) * _GOLDEN) & _MASK)
    return s


def sample_sphere(rng: SplitMix64, n: int) -> np.ndarray:
    """Uniform point on the unit sphere in R^n (normalized Gaussian vector)."""
    if n < 1:
        raise InvalidArgs(f"need n >= 1, got {n}")
    while True:
        vals: list[float] = []
        while len(vals) < n:
            z0, z1 = rng.gauss_pair()
            vals.append(z0)
            if len(vals) < n:
                vals.append(z1)
        x = np.array(vals[:n])
        nrm = float(np.linalg.norm(x))
        if nrm > 0.0:
            return x / nrm
