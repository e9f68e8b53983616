"""
Unit tests for decay fits, saturation detection and scaling regressions.
"""
import math

import numpy as np
import pytest

from echolab.analysis.fitting import (
    DecayFit,
    DecayModel,
    WindowPolicy,
    compare_models,
    fit_exponential,
    fit_gaussian,
    fit_lyapunov_capped,
    rates_agree,
    select_window,
)
from echolab.analysis.saturation import detect_saturation
from echolab.analysis.scaling import fit_capped_rate, scaling_regression
from echolab.errors import InsufficientDataError, ValidationError

pytestmark = pytest.mark.unit


def make_fit(value, uncertainty, residual=0.1, model=DecayModel.EXPONENTIAL):
    return DecayFit(model=model, rate=value, quad_coeff=None, prefactor=1.0, fit_window=(1, 10),
                    residual_rms=residual, dof=8, uncertainty=uncertainty, n_points=10)


class TestWindowSelection:
    """Test which points enter a fit."""

    def test_default_window(self, make_curve):
        """Test the default fit window."""
        t = np.arange(0, 41)
        curve = make_curve(t, np.exp(-0.2 * t), hilbert_dim=1000)
        mask, window = select_window(curve, WindowPolicy())
        # exp(-0.2 t) < 0.8 from t = 2; > 0.01 up to t = 23
        assert window == (2, 23)
        assert mask.sum() == 22

    def test_explicit_bounds(self, make_curve):
        """Test explicit window bounds."""
        t = np.arange(0, 41)
        curve = make_curve(t, np.exp(-0.2 * t), hilbert_dim=1000)
        _, window = select_window(curve, WindowPolicy(t_lo=5, t_hi=15))
        assert window == (5, 15)

    def test_saturated_curve_has_no_window(self, make_curve):
        """Test that a saturated curve has no window."""
        t = np.arange(0, 20)
        curve = make_curve(t, np.full(20, 1 / 1024), hilbert_dim=1024)
        with pytest.raises(InsufficientDataError) as exc_info:
            fit_exponential(curve)
        assert 'window' in exc_info.value.details

    def test_too_few_points(self, make_curve):
        """Test the minimum point count."""
        t = np.arange(0, 5)
        curve = make_curve(t, np.exp(-2.0 * t), hilbert_dim=1000)
        with pytest.raises(InsufficientDataError) as exc_info:
            fit_exponential(curve)
        assert exc_info.value.details['min_points'] == 4

    def test_rejects_bad_policy(self):
        """Test window policy validation."""
        with pytest.raises(ValidationError):
            WindowPolicy(upper=1.5)
        with pytest.raises(ValidationError):
            WindowPolicy(t_lo=10, t_hi=5)


class TestDecayFits:
    """Test exponential and Gaussian fits on synthetic curves."""

    def test_exponential_recovers_rate(self, make_curve):
        """Test exponential rate recovery."""
        t = np.arange(0, 21)
        fit = fit_exponential(make_curve(t, np.exp(-0.3 * t)))
        assert fit.rate == pytest.approx(0.3, rel=1e-6)
        assert fit.prefactor == pytest.approx(1.0, rel=1e-6)
        assert fit.residual_rms < 1e-10
        assert fit.model is DecayModel.EXPONENTIAL

    def test_exponential_ignores_fast_transient(self, make_curve):
        """Test that the window skips the transient."""
        t = np.arange(0, 41)
        mean = np.exp(-0.1 * t) + np.exp(-1.6 * t)
        fit = fit_exponential(make_curve(t, mean), WindowPolicy(t_lo=5))
        assert fit.rate == pytest.approx(0.1, rel=0.02)

    def test_gaussian_recovers_coefficient(self, make_curve):
        """Test Gaussian coefficient recovery."""
        t = np.arange(0, 21)
        fit = fit_gaussian(make_curve(t, np.exp(-0.01 * t ** 2)))
        assert fit.quad_coeff == pytest.approx(0.01, rel=1e-6)
        assert fit.value == fit.quad_coeff
        assert fit.rate is None

    def test_weighted_fit_uses_stderr(self, make_curve):
        """Test stderr weighting."""
        t = np.arange(0, 21)
        mean = np.exp(-0.3 * t)
        fit = fit_exponential(make_curve(t, mean, stderr=0.01 * mean))
        assert fit.rate == pytest.approx(0.3, rel=1e-6)
        assert fit.dof == fit.n_points - 2

    def test_predict(self, make_curve):
        """Test fit predictions."""
        t = np.arange(0, 21)
        fit = fit_exponential(make_curve(t, 0.9 * np.exp(-0.3 * t)))
        assert fit.predict(10) == pytest.approx(0.9 * math.exp(-3.0), rel=1e-6)

    def test_lyapunov_cap(self, make_curve):
        """Test the Lyapunov cap."""
        t = np.arange(0, 8)
        fit = fit_lyapunov_capped(make_curve(t, np.exp(-2.0 * t)), lyapunov=1.6,
                                  policy=WindowPolicy(lower_factor=0.0))
        assert fit.rate == 1.6
        assert fit.capped
        assert fit.model is DecayModel.LYAPUNOV_CAPPED

    def test_to_dict(self, make_curve):
        """Test fit serialization."""
        t = np.arange(0, 21)
        data = fit_exponential(make_curve(t, np.exp(-0.3 * t))).to_dict()
        assert data['model'] == 'exponential'
        assert isinstance(data['fit_window'], list)


class TestModelComparison:
    """Test exponential versus Gaussian selection."""

    def test_gaussian_curve_prefers_gaussian(self, make_curve):
        """Test model choice on a Gaussian curve."""
        t = np.arange(0, 31)
        comparison = compare_models(make_curve(t, np.exp(-0.005 * t ** 2)), WindowPolicy(upper=0.95))
        assert comparison.gaussian.residual_rms < comparison.exponential.residual_rms
        assert comparison.preferred is DecayModel.GAUSSIAN

    def test_exponential_curve_prefers_exponential(self, make_curve):
        """Test model choice on an exponential curve."""
        t = np.arange(0, 31)
        comparison = compare_models(make_curve(t, np.exp(-0.2 * t)))
        assert comparison.preferred is DecayModel.EXPONENTIAL

    def test_close_residuals_are_a_tie(self, make_curve, mocker):
        """Test the tie band."""
        mocker.patch('echolab.analysis.fitting.fit_exponential', return_value=make_fit(0.2, 0.01, residual=1.0))
        mocker.patch('echolab.analysis.fitting.fit_gaussian',
                     return_value=make_fit(0.01, 0.001, residual=1.05, model=DecayModel.GAUSSIAN))
        comparison = compare_models(make_curve(np.arange(5), np.ones(5)))
        assert comparison.preferred is None
        assert comparison.residual_ratio == pytest.approx(1.05)


class TestRatesAgree:

    def test_within_uncertainties(self):
        """Test agreement within errors."""
        assert rates_agree([make_fit(0.30, 0.01), make_fit(0.32, 0.01)])

    def test_outside_uncertainties(self):
        """Test disagreement outside errors."""
        assert not rates_agree([make_fit(0.30, 0.001), make_fit(0.40, 0.001)])

    def test_n_sigma_sets_the_band(self):
        """Test the n_sigma agreement band."""
        fits = [make_fit(0.30, 0.01), make_fit(0.33, 0.01)]
        assert not rates_agree(fits)
        assert rates_agree(fits, n_sigma=3.0)


class TestSaturation:
    """Test plateau detection."""

    def test_plateau_matches_inverse_dimension(self, make_curve):
        """Test the plateau against 1/N."""
        t = np.arange(0, 101)
        curve = make_curve(t, np.exp(-0.3 * t) + 1 / 256, hilbert_dim=256)
        estimate = detect_saturation(curve)
        assert estimate.plateau == pytest.approx(1 / 256, rel=0.3)
        assert estimate.matches_expected()
        assert not estimate.decaying
        assert estimate.tail_points == 26

    def test_still_decaying_tail_is_flagged(self, make_curve):
        """Test flagging of a decaying tail."""
        t = np.arange(0, 41)
        curve = make_curve(t, np.exp(-0.05 * t), hilbert_dim=256)
        estimate = detect_saturation(curve)
        assert estimate.decaying
        assert not estimate.matches_expected()

    def test_onset(self, make_curve):
        """Test saturation onset."""
        t = np.arange(0, 101)
        curve = make_curve(t, np.exp(-0.3 * t) + 1 / 256, hilbert_dim=256)
        # exp(-0.3 t) drops below 1/256 near t = 18.5
        assert 17 <= detect_saturation(curve).t_onset <= 20

    def test_rejects_bad_fraction(self, make_curve):
        """Test tail fraction validation."""
        curve = make_curve(np.arange(10), np.ones(10))
        with pytest.raises(ValidationError):
            detect_saturation(curve, tail_fraction=0.0)

    def test_too_short(self, make_curve):
        """Test short curves."""
        curve = make_curve(np.arange(1), np.ones(1))
        with pytest.raises(InsufficientDataError):
            detect_saturation(curve)


class TestScaling:
    """Test rate-versus-strength regressions."""

    def test_exact_quadratic(self):
        """Test an exact quadratic law."""
        rates = [(s, 3.0 * s ** 2) for s in (0.001, 0.002, 0.004, 0.008)]
        fit = scaling_regression(rates)
        assert fit.exponent == pytest.approx(2.0, abs=1e-6)
        assert fit.coefficient == pytest.approx(3.0, rel=1e-6)
        assert fit.span == pytest.approx(8.0)

    def test_rejects_non_positive(self):
        """Test non-positive values."""
        with pytest.raises(ValidationError):
            scaling_regression([(0.0, 1.0), (0.1, 2.0), (0.4, 3.0)])

    def test_needs_three_strengths(self):
        """Test the minimum strength count."""
        with pytest.raises(InsufficientDataError):
            scaling_regression([(0.1, 1.0), (0.4, 16.0)])

    def test_needs_fourfold_span(self):
        """Test the minimum strength span."""
        with pytest.raises(InsufficientDataError):
            scaling_regression([(0.1, 1.0), (0.2, 4.0), (0.3, 9.0)])

    def test_capped_rate(self):
        """Test the capped rate."""
        rates = [(0.01, 0.1), (0.02, 0.4), (0.04, 1.6), (0.08, 1.6)]
        fit = fit_capped_rate(rates, lyapunov=1.6)
        assert fit.coefficient == pytest.approx(1000.0)
        assert fit.saturated == (False, False, True, True)
        assert fit.crossover_strength == pytest.approx(math.sqrt(1.6e-3))
        assert fit.predict(0.08) == pytest.approx(1.6)

    def test_capped_rate_all_saturated(self):
        """Test the capped rate on saturated data."""
        with pytest.raises(InsufficientDataError):
            fit_capped_rate([(0.1, 1.6), (0.2, 1.6)], lyapunov=1.6)
