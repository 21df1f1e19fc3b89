import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfode.specfun import MittagLefflerError, gamma, mittag_leffler, rgamma

from _oracles import ml_series


class TestGamma:
    def test_known_values(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-13)
        assert gamma(9.0) == pytest.approx(40320.0, rel=1e-13)
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_pole_raises(self):
        for x in (0.0, -1.0, -3.0):
            with pytest.raises(ValueError):
                gamma(x)

    def test_overflow_raises(self):
        with pytest.raises(OverflowError):
            gamma(180.0)

    @pytest.mark.parametrize("x", [0.3, 0.7, 1.5, 4.2, 10.1])
    def test_recurrence(self, x):
        assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)

    def test_accuracy_against_mpmath(self):
        import mpmath as mp

        for x in np.geomspace(0.1, 171.0, 60):
            want = float(mp.gamma(mp.mpf(float(x))))
            assert gamma(float(x)) == pytest.approx(want, rel=1e-13)


class TestRgamma:
    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -3.0, -10.0])
    def test_zero_at_poles(self, x):
        assert rgamma(x) == 0.0

    def test_simple_values(self):
        assert rgamma(2.0) == pytest.approx(1.0, rel=1e-13)
        assert rgamma(0.5) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-13)

    def test_inverse_of_gamma(self):
        for x in (0.2, 0.9, 1.0, 3.7, 25.0, -0.5, -2.5):
            assert rgamma(x) * gamma(x) == pytest.approx(1.0, rel=1e-12)

    def test_total_function(self):
        # never raises, also where gamma overflows or at poles
        for x in np.linspace(-30.0, 300.0, 997):
            rgamma(float(x))
        assert rgamma(200.0) == 0.0


class TestMittagLeffler:
    def test_degenerate_cases(self):
        assert mittag_leffler(0.5, 1.0, 0.0) == pytest.approx(1.0, abs=1e-15)
        assert mittag_leffler(1.0, 1.0, 1.0) == pytest.approx(math.e, abs=1e-12)
        assert mittag_leffler(2.0, 1.0, -1.0) == pytest.approx(math.cos(1.0), abs=1e-12)

    def test_exponential_identity(self):
        for z in np.linspace(-2.0, 2.0, 41):
            got = mittag_leffler(1.0, 1.0, float(z))
            assert abs(got - math.exp(z)) <= 1e-12

    def test_cosh_identity(self):
        for z in np.linspace(0.0, 2.0, 21):
            got = mittag_leffler(2.0, 1.0, float(z) ** 2)
            assert abs(got - math.cosh(z)) <= 1e-12

    def test_against_series_oracle(self):
        # independent mpmath summation at 50 digits
        assert mittag_leffler(0.9, 1.0, -0.5) == pytest.approx(
            0.60340549869586096762, abs=1e-12
        )
        for alpha, beta, z in [(0.9, 1.0, -1.0), (0.2, 1.0, -0.7), (1.8, 1.0, -1.2),
                               (0.5, 0.5, 1.5), (1.1, 2.0, -3.0)]:
            want = float(ml_series(alpha, beta, z))
            assert mittag_leffler(alpha, beta, z) == pytest.approx(want, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(MittagLefflerError):
            mittag_leffler(0.5, 1.0, 51.0)
        with pytest.raises(MittagLefflerError):
            mittag_leffler(-0.1, 1.0, 0.5)

    def test_large_argument_still_finite(self):
        # exercises the log-scaled term path
        got = mittag_leffler(1.0, 1.0, 50.0)
        assert got == pytest.approx(math.exp(50.0), rel=1e-12)

    @given(st.floats(min_value=-2.0, max_value=2.0))
    @settings(max_examples=60, deadline=None)
    def test_exp_identity_property(self, z):
        assert abs(mittag_leffler(1.0, 1.0, z) - math.exp(z)) <= 1e-12
