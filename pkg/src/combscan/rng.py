"""Seeded, portable PRNG used for all synthetic-image randomness.

xoshiro256** with splitmix64 state expansion. Every random quantity in the
corpus generator flows through this generator so that a (seed, params) pair
produces bit-identical output on any platform.
"""

import math

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK64


def splitmix64_stream(seed, n):
    """First n outputs of splitmix64 started at the given 64-bit seed."""
    out = []
    state = seed & _MASK64
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        out.append(z ^ (z >> 31))
    return out


class Xoshiro256StarStar:
    """xoshiro256** generator; state seeded from splitmix64."""

    def __init__(self, seed):
        self._s = splitmix64_stream(seed, 4)

    def next_u64(self):
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def random(self):
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniforms(self, n):
        """n uniforms in [0, 1) as a float64 array, consumed in stream order."""
        inv = 1.0 / (1 << 53)
        return np.array([(self.next_u64() >> 11) * inv for _ in range(n)])

    def gaussians(self, n, mean=0.0, sigma=1.0):
        """n normal deviates via Box-Muller, two uniforms per pair.

        Pairs are consumed in stream order; u1 is shifted away from zero so
        log(u1) is always finite.
        """
        pairs = (n + 1) // 2
        u = self.uniforms(2 * pairs)
        u1 = u[0::2] + 2.0 ** -54
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(2.0 * math.pi * u2)
        z[1::2] = r * np.sin(2.0 * math.pi * u2)
        return mean + sigma * z[:n]
