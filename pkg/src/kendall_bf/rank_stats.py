"""Concordance counting, Kendall's tau and its standardised test statistic.

The concordance sum is ``S = sum_{i<j} sign(x_i - x_j) * sign(y_i - y_j)``,
so a pair tied in either coordinate contributes 0. The standardised
statistic uses the no-ties null variance ``n(n-1)(2n+5)/18`` and centres
``S`` at ``tau0 * n(n-1)/2``, its expectation under ``H0: tau = tau0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .special import std_normal_cdf

# Above this size the O(n log n) counter replaces the pairwise sign matrix.
_PAIRWISE_MAX_N = 600


@dataclass(frozen=True)
class PairedSample:
    xs: np.ndarray
    ys: np.ndarray

    def __init__(self, xs: Sequence[float], ys: Sequence[float]):
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        if x.ndim != 1 or y.ndim != 1:
            raise DomainError("paired sample needs two 1-d sequences")
        if x.shape != y.shape:
            raise DomainError(f"length mismatch: {x.size} vs {y.size}")
        if x.size < 2:
            raise DomainError(f"need at least 2 pairs, got {x.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError("paired sample values must be finite")
        object.__setattr__(self, "xs", x)
        object.__setattr__(self, "ys", y)

    @property
    def n(self) -> int:
        return int(self.xs.size)


@dataclass(frozen=True)
class KendallSummary:
    n: int
    s: int
    tau_hat: float
    t_star: float
    p_value: float


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


def null_sd(n: int) -> float:
    """Null standard deviation of S without tie correction."""
    return math.sqrt(n * (n - 1) * (2 * n + 5) / 18.0)


def _pairwise_sum(x: np.ndarray, y: np.ndarray) -> int:
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    # full matrix counts every unordered pair twice
    return int(np.sum(sx * sy)) // 2


def _dense_ranks(v: np.ndarray) -> np.ndarray:
    """Row-wise dense ranks starting at 1 (ties share a rank)."""
    order = np.argsort(v, axis=-1, kind="stable")
    sv = np.take_along_axis(v, order, axis=-1)
    new = np.ones(sv.shape, dtype=np.int64)
    new[..., 1:] = sv[..., 1:] != sv[..., :-1]
    ranks_sorted = np.cumsum(new, axis=-1)
    ranks = np.empty_like(ranks_sorted)
    np.put_along_axis(ranks, order, ranks_sorted, axis=-1)
    return ranks


def _tied_pairs(ranks: np.ndarray) -> np.ndarray:
    """Row-wise count of pairs sharing a dense rank."""
    rows, n = ranks.shape
    counts = np.zeros((rows, n + 1), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(rows), n), ranks.ravel()), 1)
    return np.sum(counts * (counts - 1) // 2, axis=1)


def _strict_inversions(v: np.ndarray) -> np.ndarray:
    """Row-wise count of pairs ``i < j`` with ``v[i] > v[j]``.

    ``v`` holds integers in ``[0, n]``. Bottom-up merge sort: at every level
    each right block looks up, for each of its values, how many values of its
    left partner block are larger. Blocks of all rows are handled together by
    folding (row, block pair) into the sort key.
    """
    rows, n = v.shape
    m = n + 2
    # keep keys within int64
    step = max(1, (2**62) // (n * m))
    if rows > step:
        return np.concatenate([_strict_inversions(v[i:i + step]) for i in range(0, rows, step)])
    arr = v.astype(np.int64)
    pos = np.arange(n)
    row_base = (np.arange(rows, dtype=np.int64) * n * m)[:, None]
    inv = np.zeros(rows, dtype=np.int64)
    width = 1
    while width < n:
        block = pos // width
        group = row_base + (block // 2) * m
        is_right = (block % 2 == 1)
        keys = group + arr
        left_keys = keys[:, ~is_right].ravel()  # ascending: blocks sorted, groups in order
        gr = group[:, is_right]
        r_keys = keys[:, is_right]
        larger = (np.searchsorted(left_keys, gr + (m - 1), side="left")
                  - np.searchsorted(left_keys, r_keys, side="right"))
        inv += larger.sum(axis=1)
        arr = np.sort(keys, axis=1) - group
        width *= 2
    return inv


def concordance_sums(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Concordance sums for a batch of samples, one per row.

    Knight's O(n log n) scheme: order each row by (x, y), count strict
    inversions of y, then ``S = n0 - n1 - n2 + n3 - 2 * inversions`` where
    n1, n2, n3 are the pairs tied in x, in y, and in both.
    """
    x = np.atleast_2d(np.asarray(xs, dtype=float))
    y = np.atleast_2d(np.asarray(ys, dtype=float))
    if x.shape != y.shape:
        raise DomainError(f"shape mismatch: {x.shape} vs {y.shape}")
    rows, n = x.shape
    if n < 2:
        return np.zeros(rows, dtype=np.int64)

    rx = _dense_ranks(x)
    ry = _dense_ranks(y)
    order = np.lexsort((ry, rx), axis=-1)
    ry_sorted = np.take_along_axis(ry, order, axis=-1)
    # joint dense rank for ties in both coordinates
    rxy = rx * (n + 1) + ry
    n3 = _tied_pairs(_dense_ranks(rxy.astype(float)))
    n1 = _tied_pairs(rx)
    n2 = _tied_pairs(ry)
    return n_pairs(n) - n1 - n2 + n3 - 2 * _strict_inversions(ry_sorted)


def concordance_sum(sample: PairedSample) -> int:
    """Number of concordant minus discordant pairs."""
    if sample.n <= _PAIRWISE_MAX_N:
        return _pairwise_sum(sample.xs, sample.ys)
    return int(concordance_sums(sample.xs, sample.ys)[0])


def standardize(s, n: int, tau0: float = 0.0):
    """Map concordance sum(s) to the standardised statistic."""
    return (np.asarray(s, dtype=float) - tau0 * n_pairs(n)) / null_sd(n)


def t_star(sample: PairedSample, tau0: float = 0.0) -> float:
    if not -1.0 <= tau0 <= 1.0:
        raise DomainError(f"tau0 must lie in [-1, 1], got {tau0}")
    return float(standardize(concordance_sum(sample), sample.n, tau0))


def t_star_from_tau(tau_hat: float, n: int, tau0: float = 0.0) -> float:
    """Standardised statistic from a reported tau estimate and sample size."""
    if not -1.0 <= tau_hat <= 1.0:
        raise DomainError(f"tau_hat must lie in [-1, 1], got {tau_hat}")
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    return (tau_hat - tau0) * n_pairs(n) / null_sd(n)


def p_value(t_star: float):
    """Two-sided normal p-value, 2 * Phi(-|T*|)."""
    return 2.0 * std_normal_cdf(-np.abs(t_star))


def kendall_summary(sample: PairedSample, tau0: float = 0.0) -> KendallSummary:
    s = concordance_sum(sample)
    n = sample.n
    t = float(standardize(s, n, tau0))
    return KendallSummary(n=n, s=s, tau_hat=s / n_pairs(n), t_star=t, p_value=float(p_value(t)))
