"""Seeded, bit-reproducible random numbers.

SplitMix64 drives everything; Gaussian variates come from the Box-Muller
transform so that streams are identical across platforms and numpy versions.
"""
import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO_M53 = 2.0 ** -53


def splitmix64_mix(z):
    """Finalizer of SplitMix64 applied to a single 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed, index):
    """Per-trial seed: first SplitMix64 output for state ``master ^ index``."""
    return splitmix64_mix(((master_seed ^ index) + GOLDEN_GAMMA) & MASK64)


class SplitMix64:
    """SplitMix64 generator with vectorized block draws.

    Output ``i`` (1-based) of a generator in state ``s`` is
    ``mix(s + i * gamma)``, so blocks are computed without a Python loop.
    """

    def __init__(self, seed=0):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return splitmix64_mix(self.state)

    def u64(self, size):
        size = int(size)
        with np.errstate(over="ignore"):
            steps = np.arange(1, size + 1, dtype=np.uint64) * np.uint64(GOLDEN_GAMMA)
            z = steps + np.uint64(self.state)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + size * GOLDEN_GAMMA) & MASK64
        return z

    def uniform(self, size=None):
        """Doubles in [0, 1) with 53 random bits."""
        if size is None:
            return (self.next_u64() >> 11) * _TWO_M53
        n = int(np.prod(size))
        out = (self.u64(n) >> np.uint64(11)).astype(np.float64) * _TWO_M53
        return out.reshape(size)

    def _box_muller(self, pairs):
        bits = self.u64(2 * pairs) >> np.uint64(11)
        u1 = (bits[0::2].astype(np.float64) + 1.0) * _TWO_M53  # (0, 1]
        u2 = bits[1::2].astype(np.float64) * _TWO_M53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * math.pi * u2
        return radius * np.cos(angle), radius * np.sin(angle)

    def standard_normal(self, size):
        n = int(np.prod(size))
        z0, z1 = self._box_muller((n + 1) // 2)
        return np.column_stack([z0, z1]).ravel()[:n].reshape(size)

    def complex_normal(self, shape):
        """Standard complex Gaussian entries, E|z|^2 = 1."""
        n = int(np.prod(shape))
        z0, z1 = self._box_muller(n)
        return ((z0 + 1j * z1) / math.sqrt(2.0)).reshape(shape)

    def integers(self, low, high):
        """Uniform integer in [low, high)."""
        span = high - low
        if span <= 0:
            raise ValueError("empty range")
        return low + self.next_u64() % span

    def choice(self, options):
        options = list(options)
        return options[self.integers(0, len(options))]

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle of a list."""
        for i in range(len(items) - 1, 0, -1):
            j = self.integers(0, i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def as_rng(seed):
    """Accept an int seed or an existing generator."""
    if isinstance(seed, SplitMix64):
        return seed
    if seed is None:
        seed = 0
    return SplitMix64(seed)
