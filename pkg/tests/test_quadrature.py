import math

import numpy as np
import pytest

from kendall_bf.errors import QuadratureError
from kendall_bf.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate


class TestRule:
    def test_weights_sum_to_two(self):
        assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
        assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)

    def test_gauss_weights_only_on_odd_nodes(self):
        assert np.all(GAUSS_WEIGHTS[::2] == 0)

    @pytest.mark.parametrize("deg", range(0, 23))
    def test_kronrod_exact_through_degree_22(self, deg):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert KRONROD_WEIGHTS @ NODES**deg == pytest.approx(exact, abs=1e-14)

    @pytest.mark.parametrize("deg", range(0, 14))
    def test_gauss_exact_through_degree_13(self, deg):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert GAUSS_WEIGHTS @ NODES**deg == pytest.approx(exact, abs=1e-14)


class TestIntegrate:
    def test_polynomial_single_panel(self):
        res = integrate(lambda x: 3 * x**2 - x + 1, -2.0, 5.0)
        assert res.value == pytest.approx(129.5, rel=1e-14)
        assert res.nodes == 15 and res.panels == 1

    def test_gaussian(self):
        res = integrate(lambda x: np.exp(-0.5 * x * x), -12.0, 12.0, abs_tol=1e-13)
        assert res.value == pytest.approx(math.sqrt(2 * math.pi), abs=1e-12)

    def test_narrow_peak_with_breakpoints(self):
        w = 1e-3
        f = lambda x: np.exp(-0.5 * ((x - 0.3) / w) ** 2)
        res = integrate(f, -1.0, 1.0, abs_tol=1e-14, breakpoints=[0.3 + k * w for k in (-16, -4, -1, 0, 1, 4, 16)])
        assert res.value == pytest.approx(w * math.sqrt(2 * math.pi), rel=1e-10)

    def test_relative_tolerance(self):
        res = integrate(np.exp, 0.0, 30.0, abs_tol=0.0, rel_tol=1e-13)
        assert res.value == pytest.approx(math.expm1(30.0), rel=1e-12)

    def test_node_cap(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: np.sin(1.0 / (x + 1e-9)), 0.0, 1.0, abs_tol=1e-14, max_nodes=2**10)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_non_finite_integrand(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: np.where(x > 0, np.inf, 1.0), -1.0, 1.0)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            integrate(np.cos, 1.0, 1.0)
