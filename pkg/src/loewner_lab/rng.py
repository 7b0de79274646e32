"""Counter-based random streams.

Report bytes depend on these exact choices, so they are pinned here:

* bit generator: numpy ``Philox`` (Philox4x64-10, Random123 constants
  ``0xD2E7470EE14C6C93``/``0xCA5A826395121157`` multipliers and
  ``0x9E3779B97F4A7C15``/``0xBB67AE8584CAA73B`` Weyl keys), keyed by the
  64-bit seed, counter starting at zero;
* uniforms: ``(raw >> 11) * 2**-53`` on each 64-bit output;
* normals: Box-Muller on consecutive uniform pairs ``(u1, u2)`` using
  ``sqrt(-2 log(1 - u1)) * (cos, sin)(2 pi u2)``;
* sub-seeds: ``SeedSequence(seed, spawn_key=path).generate_state(1, uint64)``.
"""
from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_TWO_PI = 2.0 * np.pi


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic 64-bit child seed of ``seed`` along ``path``.

    Pure in its arguments, so trials can be generated in any order.
    """
    ss = np.random.SeedSequence(seed & _MASK64, spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, np.uint64)[0])


class CounterRNG:
    """Philox stream with Box-Muller normals."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._bits = np.random.Philox(key=self.seed, counter=0)

    def uniform(self, size=None, low=0.0, high=1.0):
        count = 1 if size is None else int(np.prod(size))
        raw = self._bits.random_raw(count)
        u = (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)
        u = low + (high - low) * u
        return float(u[0]) if size is None else u.reshape(size)

    def normal(self, size):
        count = int(np.prod(size))
        pairs = (count + 1) // 2
        u = self.uniform(2 * pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        angle = _TWO_PI * u[1::2]
        z = np.empty(2 * pairs)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:count].reshape(size)

    def complex_normal(self, shape):
        """Standard complex Gaussian entries, ``E|z|^2 = 1``."""
        z = self.normal((*shape, 2))
        return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in ``[low, high]`` (inclusive)."""
        span = high - low + 1
        return low + min(int(self.uniform() * span), span - 1)

    def choice(self, seq):
        return seq[self.integers(0, len(seq) - 1)]
