"""Bayes factor for Kendall's tau under a truncated normal prior."""

__version__ = "0.1.0"

from .bayes_factor import (
    BayesFactorReport,
    Decision,
    TestSpec,
    bf_quadrature_oracle,
    bf_report,
    decide,
    log_bf_quadrature_oracle,
    log_bf_tnorm,
    log_bf_yuan_johnson,
    posterior_moments,
)
from .copula import CopulaSpec, RandomStream, child_stream, greiner_rho, sample_copula
from .elicitation import (
    ElicitedPrior,
    PowerSpec,
    detectable_tau1,
    fisher_z,
    hyperparameter_curves,
    required_sample_size,
    solve_kappa,
)
from .errors import (
    DegeneratePriorError,
    DomainError,
    KendallBFError,
    NoSolutionError,
    QuadratureError,
)
from .experiments import (
    RateSpec,
    SimulationPlan,
    SweepRow,
    bf_grid_for_data,
    comparison_sweep,
    consistency_trajectory,
    rejection_sweep,
    sensitivity_grid,
)
from .rank_stats import (
    KendallSummary,
    PairedSample,
    concordance_sum,
    kendall_summary,
    p_value,
    t_star,
    t_star_from_tau,
)
from .special import (
    TruncNormParams,
    log_std_normal_cdf,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    truncnorm_cdf,
    truncnorm_pdf,
    truncnorm_sample,
)
