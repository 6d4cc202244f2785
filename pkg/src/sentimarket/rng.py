"""Counter-based SplitMix64 generator.

All synthetic data and every randomized step (train/test split, CV folds,
SMO second-index choice) draws from this generator so that fixtures are a
pure function of ``(seed, stream)`` on every platform.

Algorithm
---------
``mix64`` is the SplitMix64 finalizer (Steele, Lea & Flood 2014)::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

A generator is keyed by ``state0 = mix64(seed) ^ mix64((stream + 1) * GOLDEN)``
with ``GOLDEN = 0x9E3779B97F4A7C15``; its k-th 64-bit output (k = 0, 1, ...)
is ``mix64(state0 + (k + 1) * GOLDEN)``, all arithmetic modulo 2**64.
Uniform doubles take the top 53 bits: ``(out >> 11) * 2**-53``. Standard
normals use Box-Muller on consecutive uniform pairs ``(u1, u2)`` with
``r = sqrt(-2 log(1 - u1))``, yielding ``r cos(2 pi u2), r sin(2 pi u2)``.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _mix_scalar(value: int) -> int:
    return int(mix64(np.array([value & _MASK], dtype=np.uint64))[0])


class SplitMix64:
    """Deterministic 64-bit generator, splittable by stream index."""

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        if self.seed < 0 or self.stream < 0:
            raise ValueError("seed and stream must be non-negative")
        key = _mix_scalar(self.seed) ^ _mix_scalar((self.stream + 1) * int(GOLDEN))
        self._state0 = np.uint64(key & _MASK)
        self._counter = 0

    def spawn(self, stream: int) -> "SplitMix64":
        """Independent generator on another stream of the same seed."""
        return SplitMix64(self.seed, stream)

    def next_u64(self, n: int) -> np.ndarray:
        k = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        return mix64(self._state0 + k * GOLDEN)

    def uniform(self, n: int | None = None, low: float = 0.0, high: float = 1.0):
        size = 1 if n is None else n
        u = (self.next_u64(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        u = low + (high - low) * u
        return float(u[0]) if n is None else u

    def normal(self, n: int | None = None, loc: float = 0.0, scale: float = 1.0):
        size = 1 if n is None else n
        pairs = (size + 1) // 2
        u = self.uniform(2 * pairs)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        z = loc + scale * z[:size]
        return float(z[0]) if n is None else z

    def integers(self, high: int, n: int | None = None):
        """Integers uniform on ``[0, high)``."""
        size = 1 if n is None else n
        v = np.minimum(np.floor(self.uniform(size) * high), high - 1).astype(np.int64)
        return int(v[0]) if n is None else v

    def permutation(self, n: int) -> np.ndarray:
        return np.argsort(self.uniform(n), kind="stable")
