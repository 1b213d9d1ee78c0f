"""Monte Carlo studies of the truncated-normal Bayes factor.

Every replicate draws its data from its own stream, derived from
``(seed, n, tau, replicate index)``. Results therefore do not depend on the
number of worker threads, and two studies that touch the same ``(n, tau)``
cell with the same seed see identical data. Within a cell all prior settings
and decision rules are evaluated on the same replicates.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bayes_factor import TestSpec, log_bf_tnorm, log_bf_yuan_johnson
from .copula import CopulaSpec, sample_copula_batch, stream_for
from .errors import DomainError
from .rank_stats import concordance_sums, p_value, standardize

CHUNK = 250


def _tuple(xs, cast=float) -> tuple:
    return tuple(cast(x) for x in xs)


@dataclass(frozen=True)
class SimulationPlan:
    n_values: tuple[int, ...]
    tau_grid: tuple[float, ...]
    lambda_grid: tuple[float, ...] = (0.0,)
    kappa_grid: tuple[float, ...] = (1.0,)
    tau0: float = 0.0
    replicates: int = 2000
    seed: int = 0
    threshold: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "n_values", _tuple(self.n_values, int))
        for name in ("tau_grid", "lambda_grid", "kappa_grid"):
            object.__setattr__(self, name, _tuple(getattr(self, name)))
        for name in ("n_values", "tau_grid", "lambda_grid", "kappa_grid"):
            if not getattr(self, name):
                raise DomainError(f"{name} must not be empty")
        if any(n < 2 for n in self.n_values):
            raise DomainError("every n must be at least 2")
        if any(not -1.0 < t < 1.0 for t in self.tau_grid):
            raise DomainError("every tau must lie in (-1, 1)")
        if any(not k > 0 for k in self.kappa_grid):
            raise DomainError("every kappa must be positive")
        if not -1.0 < self.tau0 < 1.0:
            raise DomainError(f"tau0 must lie in (-1, 1), got {self.tau0}")
        if self.replicates < 1:
            raise DomainError("replicates must be at least 1")
        if not self.threshold > 0:
            raise DomainError("threshold must be positive")

    @classmethod
    def kappa_study(cls, replicates: int = 2000, seed: int = 0) -> "SimulationPlan":
        """Rejection rates over tau for four prior sds at four sample sizes."""
        taus = tuple(round(-0.9 + 0.1 * i, 10) for i in range(19))
        return cls(n_values=(10, 30, 50, 100), tau_grid=taus,
                   kappa_grid=(0.25, 0.5, 1.0, 2.0), replicates=replicates, seed=seed)


@dataclass(frozen=True)
class SweepRow:
    n: int
    tau: float
    lambda_n: float
    kappa_n: float
    rejection_rate: float
    mean_log_bf: float
    median_log_bf: float
    replicates: int


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    tau: float
    lambda_n: float
    kappa_n: float
    rate_tnorm: float
    rate_pvalue: float
    rate_yuan_johnson: float
    replicates: int


@dataclass(frozen=True)
class RateSpec:
    """Prior schedule ``lambda_n = lambda0 n^-a``, ``kappa_n = kappa0 n^-b``."""

    a: float = 0.0
    b: float = 0.0
    lambda0: float = 0.0
    kappa0: float = 1.0

    def __post_init__(self):
        if not self.kappa0 > 0:
            raise DomainError("kappa0 must be positive")

    @property
    def consistent(self) -> bool:
        """Whether the rates fall in the region where consistency is guaranteed."""
        return 0.0 <= self.a <= self.b < 0.5

    def lambda_at(self, n: int) -> float:
        return self.lambda0 * n ** (-self.a)

    def kappa_at(self, n: int) -> float:
        return self.kappa0 * n ** (-self.b)


@dataclass(frozen=True)
class ConsistencyRow:
    n: int
    median_log_bf: float
    lambda_n: float = field(default=0.0)
    kappa_n: float = field(default=1.0)


@dataclass(frozen=True)
class GridCell:
    lambda_n: float
    kappa_n: float
    log_bf01: float
    bf01: float


def _tau_key(tau: float) -> int:
    # exact for grids on a 1e-9 lattice, non-negative for tau in (-1, 1)
    return int(round(tau * 1e9)) + 10**9


def simulate_t_stars(n: int, tau: float, tau0: float, replicates: int, seed: int,
                     workers: int = 1) -> np.ndarray:
    """Standardised statistics for ``replicates`` copula samples of size ``n``."""
    spec = CopulaSpec(tau)
    cell = stream_for(seed, n, _tau_key(tau))
    bounds = [(s, min(s + CHUNK, replicates)) for s in range(0, replicates, CHUNK)]

    def run(bound):
        u, v = sample_copula_batch(n, spec, cell, *bound)
        return concordance_sums(u, v)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    return standardize(np.concatenate(parts), n, tau0)


def _rejections(log_bf: np.ndarray, threshold: float) -> int:
    return int(np.count_nonzero(log_bf < math.log(threshold)))


def rejection_sweep(plan: SimulationPlan, workers: int = 1) -> list[SweepRow]:
    """Rejection frequency of ``BF01 < threshold`` for every (n, tau, lambda, kappa)."""
    rows = []
    for n in plan.n_values:
        for tau in plan.tau_grid:
            t = simulate_t_stars(n, tau, plan.tau0, plan.replicates, plan.seed, workers)
            for lam in plan.lambda_grid:
                for kappa in plan.kappa_grid:
                    lbf = np.asarray(log_bf_tnorm(t, n, TestSpec.make(plan.tau0, lam, kappa)))
                    rows.append(SweepRow(
                        n=n, tau=tau, lambda_n=lam, kappa_n=kappa,
                        rejection_rate=_rejections(lbf, plan.threshold) / plan.replicates,
                        mean_log_bf=float(np.mean(lbf)),
                        median_log_bf=float(np.median(lbf)),
                        replicates=plan.replicates,
                    ))
    return rows


def sensitivity_grid(n: int, tau_values: Sequence[float], lambda_grid: Sequence[float],
                     kappa_grid: Sequence[float], replicates: int, seed: int,
                     tau0: float = 0.0, threshold: float = 1.0,
                     workers: int = 1) -> list[SweepRow]:
    """Rejection frequency over a (lambda, kappa) grid at one sample size."""
    plan = SimulationPlan(n_values=(n,), tau_grid=tuple(tau_values),
                          lambda_grid=tuple(lambda_grid), kappa_grid=tuple(kappa_grid),
                          tau0=tau0, replicates=replicates, seed=seed, threshold=threshold)
    return rejection_sweep(plan, workers)


def consistency_trajectory(rates: RateSpec, tau_true: float, tau0: float,
                           n_schedule: Iterable[int], replicates: int, seed: int,
                           workers: int = 1) -> list[ConsistencyRow]:
    """Median log BF01 along a schedule of growing sample sizes.

    Under H0 the median should climb towards +inf, under H1 fall towards
    -inf, when ``rates`` lies in the consistent region.
    """
    sched = [int(n) for n in n_schedule]
    if not sched:
        raise DomainError("n_schedule must not be empty")
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise DomainError("n_schedule must be strictly increasing")
    if replicates < 1:
        raise DomainError("replicates must be at least 1")
    rows = []
    for n in sched:
        lam, kappa = rates.lambda_at(n), rates.kappa_at(n)
        t = simulate_t_stars(n, tau_true, tau0, replicates, seed, workers)
        lbf = np.asarray(log_bf_tnorm(t, n, TestSpec.make(tau0, lam, kappa)))
        rows.append(ConsistencyRow(n=n, median_log_bf=float(np.median(lbf)),
                                   lambda_n=lam, kappa_n=kappa))
    return rows


def comparison_sweep(plan: SimulationPlan, delta_yj: float = 1.0, alpha: float = 0.05,
                     workers: int = 1) -> list[ComparisonRow]:
    """Rejection rates of three rules evaluated on the same replicates.

    The rules are ``BF_tnorm < threshold``, ``p < alpha`` and
    ``BF_YJ(delta_yj) < threshold``.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    rows = []
    reps = plan.replicates
    for n in plan.n_values:
        for tau in plan.tau_grid:
            t = simulate_t_stars(n, tau, plan.tau0, reps, plan.seed, workers)
            p_rate = int(np.count_nonzero(p_value(t) < alpha)) / reps
            yj_rate = _rejections(np.asarray(log_bf_yuan_johnson(t, delta_yj)), plan.threshold) / reps
            for lam in plan.lambda_grid:
                for kappa in plan.kappa_grid:
                    lbf = np.asarray(log_bf_tnorm(t, n, TestSpec.make(plan.tau0, lam, kappa)))
                    rows.append(ComparisonRow(
                        n=n, tau=tau, lambda_n=lam, kappa_n=kappa,
                        rate_tnorm=_rejections(lbf, plan.threshold) / reps,
                        rate_pvalue=p_rate, rate_yuan_johnson=yj_rate, replicates=reps,
                    ))
    return rows


def bf_grid_for_data(t_star: float, n: int, tau0: float, lambda_grid: Sequence[float],
                     kappa_grid: Sequence[float]) -> list[GridCell]:
    """Bayes factor for one observed statistic across a grid of prior settings."""
    if any(not k > 0 for k in kappa_grid):
        raise DomainError("every kappa must be positive")
    cells = []
    for lam in lambda_grid:
        for kappa in kappa_grid:
            lbf = log_bf_tnorm(t_star, n, TestSpec.make(tau0, lam, kappa))
            cells.append(GridCell(float(lam), float(kappa), lbf, math.exp(lbf)))
    return cells
