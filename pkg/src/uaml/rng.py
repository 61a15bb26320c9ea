"""Portable, splittable pseudo-random streams.

Counter-mode splitmix64: every stream is a 64-bit key derived from
(seed, substream id); the i-th raw draw is the splitmix64 finalizer applied
to key + (i + 1) * GOLDEN. Streams are stateless in the key, so draws keyed
by (seed, sample index) are reproducible regardless of evaluation order or
worker count, and identical on every platform.

Gamma variates use the Marsaglia-Tsang squeeze method (d = a - 1/3,
c = 1 / sqrt(9 d), boost by u^(1/a) for a < 1); normals use Box-Muller.
Beta(a, b) is gamma(a) / (gamma(a) + gamma(b)).

All functions are nopython-compatible and shared with the compiled kernels.
"""

from __future__ import annotations

import numpy as np

from .backend import jit_kernel

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_SUBSTREAM = 0xD2B74407B1CE6E93

_U1 = np.uint64(1)
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


@jit_kernel
def mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


@jit_kernel
def stream_key(seed, sub):
    k = mix64(seed + np.uint64(_GOLDEN))
    return mix64(k ^ (sub * np.uint64(_SUBSTREAM)))


@jit_kernel
def uniform_at(key, ctr):
    """Uniform in [0, 1) at counter position ctr."""
    z = mix64(key + (ctr + _U1) * np.uint64(_GOLDEN))
    return float(z >> np.uint64(11)) * _INV_2_53


@jit_kernel
def normal_at(key, ctr):
    """Standard normal draw; consumes two counter positions."""
    u1 = uniform_at(key, ctr)
    u2 = uniform_at(key, ctr + _U1)
    r = np.sqrt(-2.0 * np.log(1.0 - u1))
    return r * np.cos(2.0 * np.pi * u2), ctr + np.uint64(2)


@jit_kernel
def gamma_at(shape, key, ctr):
    """Gamma(shape, 1) draw; returns (value, next counter)."""
    boost = 1.0
    a = shape
    if a < 1.0:
        u = uniform_at(key, ctr)
        ctr = ctr + _U1
        boost = (1.0 - u) ** (1.0 / a)  # 1 - u avoids 0^(1/a) underflow at u = 0
        a = a + 1.0
    d = a - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    while True:
        x, ctr = normal_at(key, ctr)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = uniform_at(key, ctr)
        ctr = ctr + _U1
        x2 = x * x
        if u < 1.0 - 0.0331 * x2 * x2:
            return boost * d * v, ctr
        if np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(v)):
            return boost * d * v, ctr


@jit_kernel
def beta_at(a, b, key, ctr):
    """Beta(a, b) draw; returns (value, next counter)."""
    g1, ctr = gamma_at(a, key, ctr)
    g2, ctr = gamma_at(b, key, ctr)
    return g1 / (g1 + g2), ctr


class Stream:
    """Stateful convenience wrapper over one (seed, substream) key."""

    def __init__(self, seed: int, sub: int = 0):
        # re-coerce: compiled functions hand uint64 results back as Python int
        self.key = np.uint64(stream_key(np.uint64(seed), np.uint64(sub)))
        self.ctr = np.uint64(0)

    def uniform(self) -> float:
        u = uniform_at(self.key, self.ctr)
        self.ctr += _U1
        return float(u)

    def normal(self) -> float:
        z, ctr = normal_at(self.key, self.ctr)
        self.ctr = np.uint64(ctr)
        return float(z)

    def gamma(self, shape: float) -> float:
        g, ctr = gamma_at(float(shape), self.key, self.ctr)
        self.ctr = np.uint64(ctr)
        return float(g)

    def beta(self, a: float, b: float) -> float:
        x, ctr = beta_at(float(a), float(b), self.key, self.ctr)
        self.ctr = np.uint64(ctr)
        return float(x)

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p
