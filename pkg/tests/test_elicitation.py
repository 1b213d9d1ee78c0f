import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kendall_bf.elicitation import (
    PowerSpec,
    detectable_tau1,
    elicit,
    fisher_z,
    hyperparameter_curves,
    required_sample_size,
    solve_kappa,
    wrong_direction_mass,
)
from kendall_bf.errors import DomainError, NoSolutionError
from kendall_bf.special import TruncNormParams, truncnorm_cdf

SPEC = PowerSpec()


class TestPowerSpec:
    @pytest.mark.parametrize("kw", [dict(alpha=0.0), dict(power=1.0), dict(tau0=1.0),
                                    dict(alpha=0.6, power=0.4)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            PowerSpec(**kw)

    def test_z_sum(self):
        assert SPEC.z_sum == pytest.approx(1.959963984540054 + 0.8416212335729142, abs=1e-12)


class TestFisherZ:
    def test_values(self):
        assert fisher_z(0.0) == 0.0
        # 0.5 * ln(1.266 / 0.734) = 0.2725543 (mpmath)
        assert fisher_z(0.266) == pytest.approx(0.27255428704480296, abs=1e-12)

    @given(st.floats(-0.999, 0.999))
    def test_odd_and_inverted_by_tanh(self, t):
        assert fisher_z(-t) == -fisher_z(t)
        assert math.tanh(fisher_z(t)) == pytest.approx(t, abs=1e-12)

    def test_increasing(self):
        zs = [fisher_z(t) for t in np.linspace(-0.99, 0.99, 500)]
        assert np.all(np.diff(zs) > 0)

    @pytest.mark.parametrize("t", [1.0, -1.0, 2.0])
    def test_domain(self, t):
        with pytest.raises(DomainError):
            fisher_z(t)


class TestSampleSize:
    def test_values(self):
        assert required_sample_size(SPEC, 0.26632) == pytest.approx(50.0, abs=0.2)
        assert required_sample_size(SPEC, 0.1868) == pytest.approx(100.0, abs=0.5)

    def test_equal_effect_is_infinite(self):
        assert required_sample_size(SPEC, 0.0) == math.inf
        assert required_sample_size(PowerSpec(tau0=0.3), 0.3) == math.inf

    def test_detectable(self):
        assert detectable_tau1(50, SPEC) == pytest.approx(0.2663, abs=5e-4)
        assert detectable_tau1(100, SPEC) == pytest.approx(0.1868, abs=5e-4)

    @pytest.mark.parametrize("tau0", [-0.4, 0.0, 0.5])
    def test_large_n_limit(self, tau0):
        assert detectable_tau1(1e14, PowerSpec(tau0=tau0)) == pytest.approx(tau0, abs=1e-5)

    @pytest.mark.parametrize("n", [4, 3, 0])
    def test_detectable_domain(self, n):
        with pytest.raises(DomainError):
            detectable_tau1(n, SPEC)

    @pytest.mark.parametrize("n", [20, 50, 100, 400])
    def test_roundtrip(self, n):
        assert abs(required_sample_size(SPEC, detectable_tau1(n, SPEC)) - n) <= 0.5

    @given(st.floats(4.5, 1e5), st.floats(-0.8, 0.8))
    def test_roundtrip_exact_inverse(self, n, tau0):
        spec = PowerSpec(tau0=tau0)
        assert required_sample_size(spec, detectable_tau1(n, spec)) == pytest.approx(n, rel=1e-8)


class TestSolveKappa:
    def test_reported_value(self):
        assert solve_kappa(0.266, 0.1) == pytest.approx(0.20755, abs=5e-4)

    def test_residual(self):
        k = solve_kappa(0.5, 0.25)
        assert abs(truncnorm_cdf(0.0, TruncNormParams(0.5, k, -1.0, 1.0)) - 0.25) <= 1e-9

    def test_small_probability_gives_small_kappa(self):
        ks = [solve_kappa(0.266, p) for p in (1e-2, 1e-4, 1e-8)]
        assert ks[0] > ks[1] > ks[2]
        assert ks[2] < 0.05

    @given(st.floats(0.01, 0.9), st.floats(0.001, 0.45), st.floats(-0.05, 0.05))
    def test_residual_property(self, lam, p, tau0):
        try:
            k = solve_kappa(lam, p, tau0)
        except NoSolutionError:
            return  # target not reachable inside the bracket
        assert abs(wrong_direction_mass(lam, k, tau0) - p) <= 1e-9

    def test_negative_mean(self):
        k = solve_kappa(-0.3, 0.1)
        p = TruncNormParams(-0.3, k, -1.0, 1.0)
        assert 1.0 - truncnorm_cdf(0.0, p) == pytest.approx(0.1, abs=1e-9)
        assert k == pytest.approx(solve_kappa(0.3, 0.1), rel=1e-7)

    def test_increasing_in_probability(self):
        ks = [solve_kappa(0.266, p) for p in np.linspace(0.02, 0.45, 30)]
        assert np.all(np.diff(ks) > 0)

    def test_zero_mean_has_no_solution(self):
        with pytest.raises(NoSolutionError):
            solve_kappa(0.0, 0.1)

    def test_unbracketed(self):
        # at kappa = 10 the wrong-direction mass for lambda = 0.95 is only 0.4976
        with pytest.raises(NoSolutionError):
            solve_kappa(0.95, 0.499)

    @pytest.mark.parametrize("p", [0.0, 0.5, 0.7, -0.1])
    def test_probability_domain(self, p):
        with pytest.raises(DomainError):
            solve_kappa(0.266, p)


class TestCurves:
    def test_reported_row(self):
        e = elicit(50, SPEC, 0.1)
        assert e.lambda_n == pytest.approx(0.2663, abs=5e-4)
        assert e.kappa_n == pytest.approx(0.2075, abs=5e-4)

    def test_optional_kappa(self):
        e = elicit(50, SPEC)
        assert e.kappa_n is None and e.wrong_dir_prob is None

    def test_values_and_monotone(self):
        rows = hyperparameter_curves(range(10, 501), SPEC, 0.1)
        lam = np.array([r.lambda_n for r in rows])
        kap = np.array([r.kappa_n for r in rows])
        assert np.all(np.diff(lam) < 0) and np.all(np.diff(kap) < 0)
        by_n = {r.n: r for r in rows}
        assert by_n[50].lambda_n == pytest.approx(0.2663, abs=5e-4)
        assert by_n[100].lambda_n == pytest.approx(0.1868, abs=5e-4)
        assert by_n[50].kappa_n == pytest.approx(0.2075, abs=5e-4)
