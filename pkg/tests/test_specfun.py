import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eirelay.specfun import (
    DomainError,
    exp_integral_gamma0,
    log_binomial,
    q_approx,
    q_exact,
    scaled_exp_integral,
)

mpmath.mp.dps = 40


def _q_oracle(x):
    return float(mpmath.ncdf(-mpmath.mpf(x)))


class TestQExact:
    def test_zero_is_half(self):
        assert q_exact(0.0) == 0.5

    def test_infinite_limits(self):
        assert q_exact(math.inf) == 0.0
        assert q_exact(-math.inf) == 1.0

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            q_exact(float("nan"))

    def test_ten_percent_point(self):
        # mpmath ncdf(-1.2816) = 0.0999915000976751...
        assert q_exact(1.2816) == pytest.approx(0.09999150009767517, rel=1e-14)

    @pytest.mark.parametrize("x", [-3.0, -0.5, 0.1, 1.0, 2.5, 5.0, 8.0, 12.0, 20.0, 37.0])
    def test_against_mpmath(self, x):
        assert q_exact(x) == pytest.approx(_q_oracle(x), rel=1e-13)

    def test_array_input(self):
        xs = np.array([0.0, 1.0, 2.0])
        out = q_exact(xs)
        assert out.shape == (3,)
        assert out[0] == 0.5

    def test_monotone_on_grid(self):
        qs = q_exact(np.linspace(-10, 40, 5001))
        assert np.all(np.diff(qs) <= 0)


class TestQApprox:
    def test_zero(self):
        assert q_approx(0.0) == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_substitution_at_three(self):
        expected = 0.25 * (math.exp(-4.5) / 3.0 + math.exp(-6.0))
        assert q_approx(3.0) == pytest.approx(expected, rel=1e-15)

    def test_relative_error_at_two(self):
        # mpmath: Q(2) = 0.0227501319481792..., approximation 0.0286493...
        ref = _q_oracle(2.0)
        assert q_approx(2.0) / ref - 1 == pytest.approx(0.25928074, abs=1e-7)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            q_approx(-0.1)

    def test_monotone_positive_and_vanishing(self):
        xs = np.linspace(0, 40, 4001)
        vals = np.array([q_approx(float(x)) for x in xs])
        assert np.all(np.diff(vals) <= 0)
        assert np.all(vals[xs < 30] > 0)
        assert vals[0] <= 1 / 3 + 1e-16
        assert q_approx(50.0) == 0.0


class TestExpIntegral:
    @pytest.mark.parametrize(
        "x, expected",
        [
            (1.0, 0.21938393439552027368),
            (10.0, 4.1569689296853242774e-06),
            (0.5, 0.55977359477616081175),
            (3.0, 0.013048381094197037413),
            (1e-8, 17.843465089050832587),
        ],
    )
    def test_reference_values(self, x, expected):
        assert abs(exp_integral_gamma0(x) - expected) <= 1e-12

    def test_series_oracle_at_one(self):
        # E1(x) = -gamma - ln x - sum (-x)^k/(k k!) summed in exact rationals
        from fractions import Fraction

        total = sum(Fraction((-1) ** k, k * math.factorial(k)) for k in range(1, 40))
        oracle = -float(mpmath.euler) - float(total)
        assert exp_integral_gamma0(1.0) == pytest.approx(oracle, abs=1e-15)

    def test_grid_against_mpmath(self):
        for x in np.geomspace(1e-8, 700, 300):
            ref = float(mpmath.e1(mpmath.mpf(float(x))))
            assert abs(exp_integral_gamma0(float(x)) - ref) <= 1e-12, x

    def test_grid_relative_accuracy(self):
        for x in np.geomspace(1e-6, 700, 200):
            ref = float(mpmath.e1(mpmath.mpf(float(x))))
            assert exp_integral_gamma0(float(x)) == pytest.approx(ref, rel=1e-12)

    def test_scaled_matches_product(self):
        for x in (0.01, 0.7, 1.0, 5.0, 40.0):
            assert scaled_exp_integral(x) == pytest.approx(math.exp(x) * exp_integral_gamma0(x), rel=1e-13)

    def test_scaled_large_argument_no_overflow(self):
        x = 1e5
        # exp(x) E1(x) ~ 1/x (1 - 1/x + 2/x^2)
        assert scaled_exp_integral(x) == pytest.approx((1 - 1 / x + 2 / x**2) / x, rel=1e-12)

    def test_asymptotic_envelope(self):
        for x in (50.0, 200.0, 600.0):
            assert 0 < exp_integral_gamma0(x) < math.exp(-x) / x

    def test_sandwich_bounds(self):
        for x in np.geomspace(1e-6, 650, 500):
            e1 = exp_integral_gamma0(float(x))
            assert 0.5 * math.exp(-x) * math.log1p(2 / x) < e1 < math.exp(-x) * math.log1p(1 / x)

    def test_monotone_decreasing(self):
        vals = [exp_integral_gamma0(float(x)) for x in np.geomspace(1e-6, 700, 1000)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("x", [0.0, -1.0, float("nan")])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            exp_integral_gamma0(x)


class TestLogBinomial:
    def test_trivial(self):
        assert log_binomial(5, 0) == 0.0
        assert log_binomial(4, 2) == pytest.approx(math.log(6), rel=1e-15)

    def test_big_integer_oracle(self):
        assert log_binomial(64, 32) == pytest.approx(math.log(1832624140942590534), rel=1e-10)

    def test_large_n_uses_lgamma(self):
        ref = float(mpmath.log(mpmath.binomial(5000, 1234)))
        assert log_binomial(5000, 1234) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("n, k", [(3, 4), (-1, 0), (3, -1)])
    def test_domain(self, n, k):
        with pytest.raises(DomainError):
            log_binomial(n, k)

    @settings(max_examples=200)
    @given(st.integers(min_value=1, max_value=40), st.data())
    def test_pascal_rule(self, n, data):
        k = data.draw(st.integers(min_value=1, max_value=n - 1)) if n > 1 else 0
        if n == 1:
            return
        lhs = math.exp(log_binomial(n, k))
        rhs = math.exp(log_binomial(n - 1, k - 1)) + math.exp(log_binomial(n - 1, k))
        assert lhs == pytest.approx(rhs, rel=1e-12)
