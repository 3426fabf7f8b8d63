import math

import numpy as np
import pytest

from slicebound.errors import DomainError
from slicebound.specfun import (
    QuadratureOptions,
    WillsIntegrandParams,
    ball_integral_bound_check,
    cauchy_power_integral,
    dist_sq_ft,
    exp_ft,
    gamma_fn,
    gamma_p,
    gamma_p_interpolator,
    gauss_sine_integral,
    indicator_ft,
    sinc_power_integral,
    sinc_product_integral,
    wills_g,
)

# high-precision references computed independently (30-digit quadrature)
REF_SINC_POWER = {
    2.5: 2.679382291500918,
    3.0: 2.416888418980815,
    6.0: 1.7278759594743863,
}
REF_GAMMA_15 = {
    0.0: 1.8054905859018672,
    1.0: 1.2694431959375853,
    3.0: 0.19797954750379031,
}
REF_DIST_SQ_FT = {
    (0.7, 1.3): 1.4522114306871429,
    (2.0, 0.4): 4.1841073933215147,
}
# Parseval closed form at p = 2: 2 pi (2 alpha + 1/sqrt(2))
REF_WILLS_G_HALF_P2 = 10.726068245337953


class TestGammaFn:
    def test_against_stdlib(self):
        for x in [0.1, 0.5, 1.0, 1.5, 2.5, 7.0, 20.5, 100.0]:
            assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-12)

    def test_half_integer(self):
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_fn(0.0)


class TestSincPowerIntegral:
    def test_p2_equals_pi(self):
        assert sinc_power_integral(2.0).value == pytest.approx(
            math.pi, abs=1e-10)

    def test_p4_closed_form(self):
        # integral of (sin x / x)^4 over the line is 2 pi / 3
        assert sinc_power_integral(4.0).value == pytest.approx(
            2 * math.pi / 3, abs=1e-10)

    @pytest.mark.parametrize("p", sorted(REF_SINC_POWER))
    def test_reference_values(self, p):
        res = sinc_power_integral(p)
        assert res.value == pytest.approx(REF_SINC_POWER[p], abs=1e-10)
        assert res.abs_error_estimate < 1e-8
        assert res.evaluations > 0

    def test_divergent_domain(self):
        with pytest.raises(DomainError):
            sinc_power_integral(1.0)

    def test_monotone_in_p(self):
        vals = [sinc_power_integral(p).value for p in (2, 3, 4, 6, 9)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestBallInequality:
    @pytest.mark.parametrize("p", [2.0, 3.5, 5.0, 10.0])
    def test_holds(self, p):
        lhs, rhs, ok = ball_integral_bound_check(p)
        assert ok
        assert lhs <= rhs + 1e-9

    def test_equality_at_two(self):
        lhs, rhs, _ = ball_integral_bound_check(2.0)
        assert lhs == pytest.approx(rhs, abs=1e-8)

    def test_gate_below_two(self):
        from slicebound.errors import GateError
        with pytest.raises(GateError):
            ball_integral_bound_check(1.5)


class TestGammaP:
    def test_p1_closed_form(self):
        for y in (0.0, 0.5, 2.0):
            assert gamma_p(1.0, y) == pytest.approx(2 / (1 + y * y), rel=1e-12)

    def test_p2_closed_form(self):
        for y in (0.0, 1.0, 3.0):
            assert gamma_p(2.0, y) == pytest.approx(
                math.sqrt(math.pi) * math.exp(-y * y / 4), rel=1e-12)

    @pytest.mark.parametrize("y", sorted(REF_GAMMA_15))
    def test_p15_reference(self, y):
        assert gamma_p(1.5, y) == pytest.approx(REF_GAMMA_15[y], abs=1e-9)

    def test_even_in_y(self):
        assert gamma_p(1.5, 2.0) == pytest.approx(gamma_p(1.5, -2.0),
                                                  rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_p(2.5, 0.0)

    def test_interpolator_matches_quadrature(self):
        fn = gamma_p_interpolator(1.3)
        for y in (0.0, 0.7, 5.0, 30.0):
            assert float(fn(y)) == pytest.approx(gamma_p(1.3, y), abs=1e-7)

    def test_interpolator_exact_endpoints(self):
        f1 = gamma_p_interpolator(1.0)
        f2 = gamma_p_interpolator(2.0)
        assert float(f1(1.0)) == pytest.approx(1.0, rel=1e-14)
        assert float(f2(0.0)) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


class TestFourierTransforms:
    def test_indicator_at_zero(self):
        assert indicator_ft(1.5, 0.0) == pytest.approx(3.0, rel=1e-14)

    def test_indicator_taylor_branch_continuous(self):
        lo = indicator_ft(1.0, 9.9e-5)
        hi = indicator_ft(1.0, 1.01e-4)
        assert lo == pytest.approx(hi, rel=1e-8)

    def test_indicator_domain(self):
        with pytest.raises(DomainError):
            indicator_ft(0.0, 1.0)

    def test_exp_ft(self):
        assert exp_ft(2.0, 0.0) == pytest.approx(1.0, rel=1e-14)
        with pytest.raises(DomainError):
            exp_ft(-1.0, 0.0)

    def test_gauss_sine_small_s(self):
        # I(s) ~ s/(2 pi) for small s
        s = 1e-6
        assert gauss_sine_integral(s) == pytest.approx(s / (2 * math.pi),
                                                       rel=1e-6)

    def test_gauss_sine_odd(self):
        assert gauss_sine_integral(-1.2) == pytest.approx(
            -gauss_sine_integral(1.2), rel=1e-14)

    def test_gauss_sine_vs_riemann_sum(self):
        s = 2.0
        y = np.linspace(0, 8, 200001)
        ref = np.trapezoid(np.exp(-math.pi * y ** 2) * np.sin(y * s), y)
        assert gauss_sine_integral(s) == pytest.approx(ref, abs=1e-9)

    def test_dist_sq_ft_at_zero(self):
        assert dist_sq_ft(0.7, 0.0) == pytest.approx(2 * 0.7 + 1, rel=1e-12)

    @pytest.mark.parametrize("key", sorted(REF_DIST_SQ_FT))
    def test_dist_sq_ft_reference(self, key):
        alpha, z = key
        assert dist_sq_ft(alpha, z) == pytest.approx(REF_DIST_SQ_FT[key],
                                                     abs=1e-10)

    def test_dist_sq_ft_pure_gaussian(self):
        # alpha = 0 reduces to the Gaussian transform
        z = 1.7
        assert dist_sq_ft(0.0, z) == pytest.approx(
            math.exp(-z * z / (4 * math.pi)), rel=1e-12)


class TestWillsG:
    def test_value_at_alpha_zero(self):
        for p in (2.0, 3.0, 4.0):
            res = wills_g(WillsIntegrandParams(alpha=0.0, p=p))
            assert res.value == pytest.approx(2 * math.pi / math.sqrt(p),
                                              abs=1e-8)

    def test_reference_value(self):
        res = wills_g(WillsIntegrandParams(alpha=0.5, p=2.0))
        assert res.value == pytest.approx(REF_WILLS_G_HALF_P2, abs=1e-6)

    def test_error_estimate_small(self):
        res = wills_g(WillsIntegrandParams(alpha=1.0, p=3.0))
        assert res.abs_error_estimate < 1e-6

    def test_params_validated(self):
        with pytest.raises(DomainError):
            WillsIntegrandParams(alpha=1.0, p=1.0)
        with pytest.raises(DomainError):
            WillsIntegrandParams(alpha=-0.1, p=2.0)


class TestCauchyPowerIntegral:
    def test_half(self):
        # ctilde = 1/2 gives exponent 2: integral is pi/2
        assert cauchy_power_integral(0.5) == pytest.approx(math.pi / 2,
                                                           rel=1e-12)

    def test_matches_quadrature(self):
        from scipy import integrate
        ct = 0.3
        q = 1.0 / (1.0 - ct)
        ref, _ = integrate.quad(lambda x: (1 + x * x) ** (-q),
                                -np.inf, np.inf)
        assert cauchy_power_integral(ct) == pytest.approx(ref, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            cauchy_power_integral(1.0)


class TestSincProductIntegral:
    def test_single_sinc(self):
        # integral_0^inf sin(b r)/r dr = pi/2
        assert sinc_product_integral([2.3], 1) == pytest.approx(
            math.pi / 2, abs=1e-12)

    def test_two_equal_q2(self):
        # integral_0^inf sin^2(b r)/r^2 dr = pi b / 2
        b = 1.4
        assert sinc_product_integral([b, b], 2) == pytest.approx(
            math.pi * b / 2, abs=1e-11)

    def test_against_brute_force(self):
        from scipy import integrate
        betas = np.array([0.9, 1.7, 0.4])
        q = 2
        ref = 0.0
        edges = np.linspace(1e-12, 3000.0, 30001)
        fn = lambda r: np.prod(np.sin(np.outer(r, betas)), axis=1) / r ** q
        for a, b in zip(edges[:-1], edges[1:]):
            ref += integrate.fixed_quad(fn, a, b, n=10)[0]
        assert sinc_product_integral(betas, q) == pytest.approx(ref, abs=1e-6)

    def test_sign_flip(self):
        v1 = sinc_product_integral([1.0, 2.0], 2)
        v2 = sinc_product_integral([-1.0, 2.0], 2)
        assert v2 == pytest.approx(-v1, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            sinc_product_integral([1.0], 2)


class TestQuadratureOptions:
    def test_defaults_used(self):
        opts = QuadratureOptions(abs_tol=1e-6)
        res = sinc_power_integral(3.0, opts)
        assert res.value == pytest.approx(REF_SINC_POWER[3.0], abs=1e-5)
