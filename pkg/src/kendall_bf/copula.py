"""Seeded bivariate samples with a prescribed Kendall's tau.

Samples come from the bivariate Gaussian copula whose correlation is tied to
tau by Greiner's relation ``tau = 2 arcsin(rho) / pi``. Randomness is drawn
from counter-based Philox streams keyed by ``(seed, stream_id)``, so the
output of any replicate depends only on its key and never on which thread
produced it or in what order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rank_stats import PairedSample
from .special import std_normal_cdf

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One SplitMix64 output step; a cheap bijective 64-bit mixer."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RandomStream:
    """Key of an independent random sequence.

    A stream is a value: calling :meth:`generator` twice gives two generators
    that produce the same numbers.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream_id", int(self.stream_id) & _MASK64)

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, index: int) -> "RandomStream":
        return child_stream(self, index)


def child_stream(rng: RandomStream, replicate_index: int) -> RandomStream:
    """Deterministically derive the stream for one replicate."""
    if replicate_index < 0:
        raise DomainError(f"replicate index must be non-negative, got {replicate_index}")
    mixed = splitmix64(rng.stream_id ^ splitmix64(replicate_index + 1))
    return RandomStream(rng.seed, mixed)


def stream_for(seed: int, *key: int) -> RandomStream:
    """Stream addressed by a tuple of non-negative integers, e.g. a grid cell."""
    s = RandomStream(seed, 0)
    for k in key:
        s = child_stream(s, k)
    return s


def greiner_rho(tau):
    """Gaussian-copula correlation with Kendall's tau equal to ``tau``."""
    tau = np.asarray(tau, dtype=float)
    if np.any(np.abs(tau) > 1.0):
        raise DomainError("tau must lie in [-1, 1]")
    out = np.sin(0.5 * math.pi * tau)
    return float(out) if out.ndim == 0 else out


def kendall_tau_of_rho(rho):
    rho = np.asarray(rho, dtype=float)
    out = 2.0 * np.arcsin(rho) / math.pi
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CopulaSpec:
    tau: float

    def __post_init__(self):
        if not -1.0 < self.tau < 1.0:
            raise DomainError(f"copula tau must lie in (-1, 1), got {self.tau}")

    @property
    def rho(self) -> float:
        return greiner_rho(self.tau)


def _uniform_pair(gen: np.random.Generator, n: int, rho: float):
    z = gen.standard_normal((2, n))
    z1 = z[0]
    z2 = rho * z1 + math.sqrt(1.0 - rho * rho) * z[1]
    return std_normal_cdf(z1), std_normal_cdf(z2)


def sample_copula(n: int, spec: CopulaSpec, rng: RandomStream) -> PairedSample:
    """``n`` pairs with uniform margins from the Gaussian copula."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    u, v = _uniform_pair(rng.generator(), n, spec.rho)
    return PairedSample(u, v)


def sample_copula_batch(n: int, spec: CopulaSpec, cell: RandomStream,
                        start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Replicates ``start..stop-1`` of a cell as two ``(stop - start, n)`` arrays.

    Row ``i`` is exactly ``sample_copula(n, spec, child_stream(cell, start + i))``.
    """
    rows = stop - start
    u = np.empty((rows, n))
    v = np.empty((rows, n))
    rho = spec.rho
    for i in range(rows):
        u[i], v[i] = _uniform_pair(child_stream(cell, start + i).generator(), n, rho)
    return u, v
