"""Counter-based random numbers keyed by ``(seed, label, index)``.

The stream is Philox4x64-10 (numpy's ``Philox`` bit generator) with

    key     = [splitmix64(seed ^ fnv1a64(label)), splitmix64(index)]
    counter = 0

and raw 64-bit outputs taken in order from ``random_raw``. Derived variates:

* uniform double: ``(x >> 11) * 2**-53``
* normal: Box-Muller on consecutive uniforms ``(u1, u2)``, giving
  ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`` then the matching ``sin`` value
* complex normal: ``(N1 + i N2) / sqrt(2)`` from consecutive normals
* integer in ``[low, high)``: ``low + ((x * (high - low)) >> 64)``

Every quantity is a pure function of the key, so trials can run in any order.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & MASK64
    return h


def _count(size) -> int:
    if size is None:
        return 1
    return int(np.prod(size))


def _shape(values: np.ndarray, size):
    if size is None:
        return values[0].item()
    return values.reshape(size)


class CounterRNG:
    """Numpy-style subset: ``random``, ``uniform``, ``standard_normal``,
    ``complex_normal``, ``integers``."""

    def __init__(self, seed: int, label: str = "", index: int = 0):
        seed &= MASK64
        key = np.array([splitmix64(seed ^ fnv1a64(label)), splitmix64(index & MASK64)], dtype=np.uint64)
        self._bits = np.random.Philox(key=key, counter=0)

    def raw(self, n: int) -> np.ndarray:
        return np.asarray(self._bits.random_raw(n), dtype=np.uint64)

    def random(self, size=None):
        n = _count(size)
        x = (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return _shape(x, size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        n = _count(size)
        u = np.asarray(self.random(n))
        return _shape(low + (high - low) * u, size)

    def standard_normal(self, size=None):
        n = _count(size)
        pairs = (n + 1) // 2
        u = np.asarray(self.random(2 * pairs)).reshape(pairs, 2)
        r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        theta = 2.0 * np.pi * u[:, 1]
        z = np.column_stack([r * np.cos(theta), r * np.sin(theta)]).ravel()[:n]
        return _shape(z, size)

    def complex_normal(self, size=None):
        n = _count(size)
        z = np.asarray(self.standard_normal(2 * n)).reshape(n, 2)
        c = (z[:, 0] + 1j * z[:, 1]) / np.sqrt(2.0)
        return _shape(c, size)

    def integers(self, low: int, high: int | None = None, size=None):
        if high is None:
            low, high = 0, low
        span = high - low
        if span <= 0:
            raise ValueError("integers() needs low < high")
        n = _count(size)
        vals = np.array([low + ((int(x) * span) >> 64) for x in self.raw(n)], dtype=np.int64)
        return _shape(vals, size)
