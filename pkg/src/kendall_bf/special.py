"""Standard normal and truncated normal special functions.

Everything here accepts either Python scalars or numpy arrays. Scalar input
gives a plain ``float`` back, array input gives an array of the broadcast
shape. The standard normal routines are thin wrappers over the
``scipy.special`` ufuncs (``ndtr``, ``log_ndtr``, ``ndtri``), which evaluate
the complementary error function with separate tail expansions, so
``log_std_normal_cdf`` stays finite far into the lower tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np
from scipy import special as _sp

from .errors import DegeneratePriorError, DomainError

if TYPE_CHECKING:
    from .copula import RandomStream

ArrayLike = Union[float, np.ndarray]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_LOG_INV_SQRT_2PI = -0.5 * math.log(2.0 * math.pi)
# Normalising mass below this is treated as degenerate.
MIN_MASS = 1e-300
_LOG_MIN_MASS = math.log(MIN_MASS)


def _out(x):
    """Unwrap 0-d arrays to Python floats."""
    if np.ndim(x) == 0:
        return float(x)
    return x


@dataclass(frozen=True)
class TruncNormParams:
    """Normal(mean, sd**2) restricted to ``[lower, upper]``."""

    mean: float
    sd: float
    lower: float
    upper: float

    def __post_init__(self):
        vals = (self.mean, self.sd, self.lower, self.upper)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"truncated normal parameters must be finite: {vals}")
        if not self.sd > 0:
            raise DomainError(f"sd must be positive, got {self.sd}")
        if not self.lower < self.upper:
            raise DomainError(f"need lower < upper, got [{self.lower}, {self.upper}]")

    @classmethod
    def for_shift(cls, mean: float, sd: float, tau0: float) -> "TruncNormParams":
        """Prior on the shift ``tau - tau0``, supported on ``[-1 - tau0, 1 - tau0]``."""
        return cls(mean, sd, -1.0 - tau0, 1.0 - tau0)

    @property
    def alpha(self) -> float:
        return (self.lower - self.mean) / self.sd

    @property
    def beta(self) -> float:
        return (self.upper - self.mean) / self.sd


def std_normal_pdf(x: ArrayLike) -> ArrayLike:
    x = np.asarray(x, dtype=float)
    return _out(_INV_SQRT_2PI * np.exp(-0.5 * x * x))


def std_normal_logpdf(x: ArrayLike) -> ArrayLike:
    x = np.asarray(x, dtype=float)
    return _out(_LOG_INV_SQRT_2PI - 0.5 * x * x)


def std_normal_cdf(x: ArrayLike) -> ArrayLike:
    return _out(_sp.ndtr(np.asarray(x, dtype=float)))


def log_std_normal_cdf(x: ArrayLike) -> ArrayLike:
    """log Phi(x), accurate in the far lower tail (well past x = -40)."""
    return _out(_sp.log_ndtr(np.asarray(x, dtype=float)))


def std_normal_quantile(p: ArrayLike) -> ArrayLike:
    """Inverse of Phi on the open interval (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise DomainError("normal quantile needs 0 < p < 1")
    return _out(_sp.ndtri(p))


def log_normal_mass(lo: ArrayLike, hi: ArrayLike) -> ArrayLike:
    """log(Phi(hi) - Phi(lo)) for lo < hi, without cancellation in either tail.

    When the whole interval sits in the upper tail it is reflected into the
    lower tail first, then ``log Phi(hi) + log1p(-Phi(lo)/Phi(hi))`` is used.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    flip = lo > 0.0
    a = np.where(flip, -hi, lo)
    b = np.where(flip, -lo, hi)
    log_b = _sp.log_ndtr(b)
    log_a = _sp.log_ndtr(a)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = log_b + np.log1p(-np.exp(log_a - log_b))
    return _out(out)


def _log_mass(p: TruncNormParams) -> float:
    log_z = log_normal_mass(p.alpha, p.beta)
    if not log_z > _LOG_MIN_MASS:
        raise DegeneratePriorError(
            f"truncated normal {p} has normalising mass below {MIN_MASS:g}"
        )
    return log_z


def truncnorm_mass(p: TruncNormParams) -> float:
    """Normal probability of the support, Phi(beta) - Phi(alpha)."""
    return math.exp(_log_mass(p))


def truncnorm_pdf(t: ArrayLike, p: TruncNormParams) -> ArrayLike:
    log_z = _log_mass(p)
    t = np.asarray(t, dtype=float)
    z = (t - p.mean) / p.sd
    dens = np.exp(_LOG_INV_SQRT_2PI - 0.5 * z * z - log_z) / p.sd
    inside = (t >= p.lower) & (t <= p.upper)
    return _out(np.where(inside, dens, 0.0))


def truncnorm_cdf(t: ArrayLike, p: TruncNormParams) -> ArrayLike:
    log_z = _log_mass(p)
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, p.lower, p.upper)
    zc = (tc - p.mean) / p.sd
    # mass of [lower, t] over mass of [lower, upper]
    alpha = np.full_like(zc, p.alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_num = np.where(zc > alpha, log_normal_mass(alpha, zc), -np.inf)
    out = np.exp(log_num - log_z)
    out = np.where(t <= p.lower, 0.0, np.where(t >= p.upper, 1.0, np.minimum(out, 1.0)))
    return _out(out)


def truncnorm_ppf(q: ArrayLike, p: TruncNormParams) -> ArrayLike:
    """Quantile function on [0, 1].

    Works from whichever side of the support is further from the mode so the
    target normal probability is never formed as a difference of two numbers
    near 1.
    """
    _log_mass(p)
    q = np.asarray(q, dtype=float)
    if np.any((q < 0.0) | (q > 1.0)):
        raise DomainError("truncnorm quantile needs 0 <= q <= 1")
    a, b = p.alpha, p.beta
    if a > 0.0:
        # Support in the upper tail: mirror into the lower tail.
        z = -_lower_tail_ppf(1.0 - q, -b, -a)
    else:
        z = _lower_tail_ppf(q, a, b)
    x = p.mean + p.sd * z
    return _out(np.clip(x, p.lower, p.upper))


def _lower_tail_ppf(q, a, b):
    # Solve Phi(z) = Phi(a) + q (Phi(b) - Phi(a)) in log space.
    la = _sp.log_ndtr(a)
    lb = _sp.log_ndtr(b)
    with np.errstate(divide="ignore"):
        log_target = np.logaddexp(la + np.log1p(-q), lb + np.log(q))
    z = _sp.ndtri_exp(log_target)
    return np.clip(z, a, b)


def truncnorm_sample(
    p: TruncNormParams,
    rng: "np.random.Generator | RandomStream",
    size: int | tuple[int, ...] | None = None,
) -> ArrayLike:
    """Inverse-cdf draws from ``TN(p)``.

    ``rng`` is either a numpy Generator (advanced in place) or a
    :class:`~kendall_bf.copula.RandomStream`, which is turned into a fresh
    generator so the draw is a pure function of the stream.
    """
    gen = rng if isinstance(rng, np.random.Generator) else rng.generator()
    u = gen.random(size)
    return truncnorm_ppf(u, p)
