"""Choosing the prior hyperparameters from a power analysis.

The prior mean is the smallest effect a two-sided test with the given size
and power can detect at sample size ``n``, taken from the Bonett-Wright
sample-size formula for Kendall's tau,

    n = 4 + 0.437 * ((z_{alpha/2} + z_beta) / (Z(tau1) - Z(tau0)))**2,

with Z the Fisher z-transform. The prior sd is then set so a chosen share of
the prior mass falls on the wrong side of zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import DomainError, NoSolutionError
from .special import TruncNormParams, std_normal_quantile, truncnorm_cdf

BONETT_WRIGHT_CONST = 0.437
KAPPA_BRACKET = (1e-6, 10.0)


@dataclass(frozen=True)
class PowerSpec:
    alpha: float = 0.05
    power: float = 0.8
    tau0: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.power < 1.0:
            raise DomainError(f"power must lie in (0, 1), got {self.power}")
        if not -1.0 < self.tau0 < 1.0:
            raise DomainError(f"tau0 must lie in (-1, 1), got {self.tau0}")
        if not self.alpha + (1.0 - self.power) < 1.0:
            raise DomainError("need alpha + beta < 1")

    @property
    def z_sum(self) -> float:
        """Upper alpha/2 point plus upper beta point of N(0, 1)."""
        return std_normal_quantile(1.0 - self.alpha / 2.0) + std_normal_quantile(self.power)


@dataclass(frozen=True)
class ElicitedPrior:
    lambda_n: float
    n: int
    kappa_n: Optional[float] = None
    wrong_dir_prob: Optional[float] = None


def fisher_z(tau: float) -> float:
    if not -1.0 < tau < 1.0:
        raise DomainError(f"Fisher z needs |tau| < 1, got {tau}")
    return math.atanh(tau)


def required_sample_size(spec: PowerSpec, tau1: float) -> float:
    """Continuous sample size needed to detect ``tau1``; +inf when tau1 == tau0."""
    gap = fisher_z(tau1) - fisher_z(spec.tau0)
    if gap == 0.0:
        return math.inf
    ratio = spec.z_sum / gap
    return 4.0 + BONETT_WRIGHT_CONST * ratio * ratio


def detectable_tau1(n: float, spec: PowerSpec) -> float:
    """Inverse of :func:`required_sample_size` on the ``tau1 > tau0`` branch."""
    if not n > 4:
        raise DomainError(f"detectable effect needs n > 4, got {n}")
    e = math.exp(2.0 * spec.z_sum / math.sqrt((n - 4.0) / BONETT_WRIGHT_CONST))
    r = (1.0 - spec.tau0) / (1.0 + spec.tau0)
    return (e - r) / (e + r)


def wrong_direction_mass(lambda_n: float, kappa: float, tau0: float = 0.0) -> float:
    """Prior probability that the shift has the opposite sign to ``lambda_n``."""
    prior = TruncNormParams.for_shift(lambda_n, kappa, tau0)
    below = truncnorm_cdf(0.0, prior)
    return below if lambda_n > 0 else 1.0 - below


def solve_kappa(lambda_n: float, wrong_dir_prob: float, tau0: float = 0.0,
                tol: float = 1e-9, max_iter: int = 300) -> float:
    """Prior sd giving ``wrong_dir_prob`` mass on the wrong side of zero.

    Bisection on ``kappa`` in ``[1e-6, 10]``; the wrong-direction mass is
    increasing in ``kappa``, so the root is unique when bracketed. The
    residual tolerance is ``min(tol, 1e-6 * wrong_dir_prob)`` so tiny target
    probabilities are still matched in relative terms.
    """
    if not 0.0 < wrong_dir_prob < 0.5:
        raise DomainError(f"wrong_dir_prob must lie in (0, 0.5), got {wrong_dir_prob}")
    if lambda_n == 0.0:
        raise NoSolutionError("lambda_n = 0 puts mass 1/2 on each side for every kappa")
    if not -1.0 - tau0 < lambda_n < 1.0 - tau0:
        raise DomainError(f"lambda_n={lambda_n} outside the shift support for tau0={tau0}")

    tol = min(tol, 1e-6 * wrong_dir_prob)

    def resid(k):
        return wrong_direction_mass(lambda_n, k, tau0) - wrong_dir_prob

    lo, hi = KAPPA_BRACKET
    f_lo, f_hi = resid(lo), resid(hi)
    if f_lo > 0 or f_hi < 0:
        raise NoSolutionError(
            f"wrong-direction mass {wrong_dir_prob} not reachable for kappa in "
            f"[{lo:g}, {hi:g}] (range {f_lo + wrong_dir_prob:.3g} to {f_hi + wrong_dir_prob:.3g})"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = resid(mid)
        if abs(f_mid) <= tol:
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    raise NoSolutionError(f"bisection did not reach |residual| <= {tol:g}")


def elicit(n: int, spec: PowerSpec, wrong_dir_prob: Optional[float] = None) -> ElicitedPrior:
    lam = detectable_tau1(n, spec)
    kappa = None if wrong_dir_prob is None else solve_kappa(lam, wrong_dir_prob, spec.tau0)
    return ElicitedPrior(lambda_n=lam, n=n, kappa_n=kappa, wrong_dir_prob=wrong_dir_prob)


def hyperparameter_curves(n_range: Iterable[int], spec: PowerSpec,
                          wrong_dir_prob: float) -> list[ElicitedPrior]:
    """Elicited (lambda_n, kappa_n) for each sample size in ``n_range``."""
    return [elicit(int(n), spec, wrong_dir_prob) for n in n_range]
