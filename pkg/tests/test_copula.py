import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kendall_bf.copula import (
    CopulaSpec,
    RandomStream,
    child_stream,
    greiner_rho,
    kendall_tau_of_rho,
    sample_copula,
    sample_copula_batch,
    splitmix64,
    stream_for,
)
from kendall_bf.errors import DomainError
from kendall_bf.rank_stats import PairedSample, concordance_sum, concordance_sums, kendall_summary, standardize
from kendall_bf.special import std_normal_quantile


def ks_uniform(u):
    xs = np.sort(u)
    n = xs.size
    return max(np.max(np.arange(1, n + 1) / n - xs), np.max(xs - np.arange(n) / n))


class TestGreiner:
    def test_values(self):
        assert greiner_rho(0.0) == 0.0
        assert greiner_rho(1.0) == 1.0
        assert greiner_rho(0.5) == pytest.approx(0.7071068, abs=1e-7)

    def test_spec_rho(self):
        assert CopulaSpec(0.3).rho == pytest.approx(math.sin(0.15 * math.pi), abs=1e-14)

    @given(st.floats(-1.0, 1.0))
    def test_inverse(self, rho):
        assert greiner_rho(kendall_tau_of_rho(rho)) == pytest.approx(rho, abs=1e-12)

    @given(st.floats(-0.9, 0.9))
    def test_inverse_other_way(self, t):
        # arcsin is ill-conditioned near +-1, so stay inside
        assert kendall_tau_of_rho(greiner_rho(t)) == pytest.approx(t, abs=1e-12)

    @pytest.mark.parametrize("tau", [1.0, -1.0, 1.5])
    def test_spec_domain(self, tau):
        with pytest.raises(DomainError):
            CopulaSpec(tau)

    def test_rho_domain(self):
        with pytest.raises(DomainError):
            greiner_rho(1.01)


class TestStreams:
    def test_splitmix_reference(self):
        # first outputs of the reference generator seeded with 0
        state, outs = 0, []
        for _ in range(3):
            outs.append(splitmix64(state))
            state = (state + 0x9E3779B97F4A7C15) & ((1 << 64) - 1)
        assert outs == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

    def test_stream_is_a_value(self):
        s = RandomStream(7, 3)
        np.testing.assert_array_equal(s.generator().random(5), RandomStream(7, 3).generator().random(5))

    def test_children_differ(self):
        base = RandomStream(7)
        a, b = child_stream(base, 0), child_stream(base, 1)
        assert a != b
        assert a.generator().random() != b.generator().random()
        assert child_stream(base, 0) == a

    def test_child_of_negative_index(self):
        with pytest.raises(DomainError):
            child_stream(RandomStream(1), -1)

    def test_children_uncorrelated(self):
        base = RandomStream(7)
        u0 = base.child(0).generator().random(10_000)
        u1 = base.child(1).generator().random(10_000)
        assert abs(np.corrcoef(u0, u1)[0, 1]) <= 0.03

    def test_stream_for_keys(self):
        assert stream_for(1, 10, 5) == stream_for(1, 10, 5)
        assert stream_for(1, 10, 5) != stream_for(1, 5, 10)
        assert stream_for(1, 10) != stream_for(2, 10)

    def test_seed_masked(self):
        assert RandomStream(-1).seed == (1 << 64) - 1


class TestSampling:
    def test_deterministic(self):
        s = stream_for(99, 4)
        a = sample_copula(50, CopulaSpec(0.4), s)
        b = sample_copula(50, CopulaSpec(0.4), s)
        np.testing.assert_array_equal(a.xs, b.xs)
        np.testing.assert_array_equal(a.ys, b.ys)

    def test_batch_rows_match_single(self):
        cell = stream_for(5, 12)
        u, v = sample_copula_batch(30, CopulaSpec(-0.2), cell, 3, 7)
        for i in range(4):
            one = sample_copula(30, CopulaSpec(-0.2), child_stream(cell, 3 + i))
            np.testing.assert_array_equal(u[i], one.xs)
            np.testing.assert_array_equal(v[i], one.ys)

    def test_min_size(self):
        with pytest.raises(DomainError):
            sample_copula(1, CopulaSpec(0.0), RandomStream(0))

    def test_large_sample_tau(self):
        smp = sample_copula(100_000, CopulaSpec(0.3), RandomStream(2024, 1))
        assert kendall_summary(smp).tau_hat == pytest.approx(0.3, abs=0.01)

    @pytest.mark.parametrize("tau", [-0.7, 0.0, 0.9])
    def test_uniform_margins(self, tau):
        smp = sample_copula(100_000, CopulaSpec(tau), RandomStream(31, 2))
        assert np.all((smp.xs > 0) & (smp.xs < 1)) and np.all((smp.ys > 0) & (smp.ys < 1))
        assert ks_uniform(smp.xs) <= 0.01
        assert ks_uniform(smp.ys) <= 0.01

    def test_margin_choice_irrelevant(self):
        smp = sample_copula(500, CopulaSpec(0.45), RandomStream(8))
        normal = PairedSample(std_normal_quantile(smp.xs), std_normal_quantile(smp.ys))
        assert concordance_sum(normal) == concordance_sum(smp)

    def test_null_mean_statistic(self):
        u, v = sample_copula_batch(100, CopulaSpec(0.0), stream_for(0, 100), 0, 2000)
        assert abs(standardize(concordance_sums(u, v), 100).mean()) <= 0.07
