"""
Unit tests for the Boltzmann and Loschmidt echo engines.
"""
import math

import numpy as np
import pytest

from echolab.echo.engine import (
    EchoRunSpec,
    boltzmann_echo_curve,
    boltzmann_echo_single,
    count_steps,
    default_times,
    realization_states,
    summarize_samples,
    validate_times,
)
from echolab.echo.loschmidt import loschmidt_echo_curve, loschmidt_echo_single
from echolab.errors import NormalizationError, StepBudgetError, ValidationError
from echolab.preparation.ensembles import Rho2Kind, Rho2Spec
from echolab.preparation.wavepacket import WavepacketSpec, realization_wavepacket
from echolab.quantum.floquet import build_loschmidt_steps
from echolab.quantum.oracle import dense_boltzmann_echo
from echolab.quantum.params import ModelParams
from echolab.quantum.states import WaveFunction1P

pytestmark = pytest.mark.unit


def run_spec(params, times, realizations=4, seed=0, sample_count=None):
    return EchoRunSpec(
        params=params,
        psi1=WavepacketSpec(),
        rho2=Rho2Spec(Rho2Kind.RANDOM_PURE, sample_count=sample_count or realizations, seed=seed),
        times=times,
        realizations=realizations,
        seed=seed,
    )


class TestMeasurementTimes:
    """Test time grids and step counting."""

    def test_default_times(self):
        """Test the default time grid."""
        times = default_times(50)
        assert times[:31] == tuple(range(31))
        assert times[31:] == (35, 40, 45, 50)

    def test_default_times_short(self):
        """Test a short default grid."""
        assert default_times(3) == (0, 1, 2, 3)

    def test_count_steps(self):
        """Test step counting."""
        assert count_steps((0, 1, 2, 5)) == 5 + 8
        assert count_steps(()) == 0

    @pytest.mark.parametrize('times', [(), (3, 2), (1, 1), (-1, 2)])
    def test_validate_times_rejects(self, times):
        """Test invalid time grids."""
        with pytest.raises(ValidationError):
            validate_times(times)

    def test_run_spec_steps(self, chaotic_params):
        """Test run spec step counts."""
        spec = run_spec(chaotic_params, (0, 10, 20), realizations=3)
        assert spec.steps_per_realization == 50
        assert spec.total_steps == 150

    def test_run_spec_rejects_zero_realizations(self, chaotic_params):
        """Test zero realizations."""
        with pytest.raises(ValidationError):
            run_spec(chaotic_params, (0, 1), realizations=0)


class TestBoltzmannEchoSingle:
    """Test single-realization echo values."""

    def test_time_zero_is_one(self, small_params, random_state):
        """Test M_B(0)."""
        assert boltzmann_echo_single(small_params, random_state(8), random_state(8), 0) == 1.0

    def test_unperturbed_echo_is_one(self, random_state):
        """Test the unperturbed echo."""
        params = ModelParams(N=64, K1=10.09, K2=10.09)
        value = boltzmann_echo_single(params, random_state(64), random_state(64), 25)
        assert abs(value - 1.0) < 1e-10

    def test_sigma2_does_not_spoil_decoupled_echo(self, random_state):
        """Test that sigma2 alone leaves the echo at one."""
        params = ModelParams(N=32, K1=10.09, K2=6.0, sigma2=0.7)
        value = boltzmann_echo_single(params, random_state(32), random_state(32), 15)
        assert abs(value - 1.0) < 1e-10

    def test_matches_dense_oracle(self, random_params, random_state):
        """Test random parameters against the dense propagator."""
        for _ in range(20):
            params = random_params(8)
            psi1, phi2 = random_state(8), random_state(8)
            for t in range(6):
                split = boltzmann_echo_single(params, psi1, phi2, t)
                dense = dense_boltzmann_echo(params, psi1, phi2, t)
                assert abs(split - dense) < 1e-10, (params, t)

    def test_matches_dense_oracle_on_smallest_torus(self, random_state):
        """Test N = 4 against the dense propagator."""
        params = ModelParams(N=4, K1=10.09, K2=7.7, sigma1=0.3, sigma2=0.1,
                             eps_f=0.25, eps_b=0.15, phase_offset=0.33)
        psi1, phi2 = random_state(4), random_state(4)
        for t in (1, 2, 3):
            assert abs(boltzmann_echo_single(params, psi1, phi2, t)
                       - dense_boltzmann_echo(params, psi1, phi2, t)) < 1e-10

    def test_value_is_a_probability(self, small_params, random_state):
        """Test echo values lie in [0, 1]."""
        for t in range(1, 6):
            value = boltzmann_echo_single(small_params, random_state(8), random_state(8), t)
            assert 0.0 <= value <= 1.0

    def test_rejects_unnormalized_state(self, small_params, random_state):
        """Test unnormalized input."""
        bad = WaveFunction1P(random_state(8).amplitudes * 1.01)
        with pytest.raises(NormalizationError) as exc_info:
            boltzmann_echo_single(small_params, bad, random_state(8), 2)
        assert exc_info.value.exit_code == 2

    def test_rejects_negative_time(self, small_params, random_state):
        """Test negative time."""
        with pytest.raises(ValidationError):
            boltzmann_echo_single(small_params, random_state(8), random_state(8), -1)


class TestBoltzmannEchoCurve:
    """Test ensemble curves."""

    def test_curve_matches_single_realizations(self):
        """Test curve samples against single runs."""
        params = ModelParams(N=16, K1=10.09, K2=8.0, sigma1=0.05, eps_f=0.03)
        spec = run_spec(params, (0, 1, 3, 6), realizations=3, seed=9)
        curve = boltzmann_echo_curve(spec)
        for r in range(3):
            psi1, phi2 = realization_states(spec, r)
            for i, t in enumerate(spec.times):
                assert curve.samples[r, i] == pytest.approx(
                    boltzmann_echo_single(params, psi1, phi2, t), abs=1e-12
                )

    def test_curve_shape_and_start(self, chaotic_params):
        """Test curve shape and first point."""
        spec = run_spec(chaotic_params.with_updates(sigma1=0.02), (0, 2, 4), realizations=3)
        curve = boltzmann_echo_curve(spec)
        assert len(curve) == 3
        assert curve.mean[0] == 1.0
        assert curve.stderr[0] == 0.0
        assert curve.samples.shape == (3, 3)
        assert curve.saturation_level == pytest.approx(1 / 64)

    def test_same_seed_reproduces(self):
        """Test seeded reproducibility."""
        params = ModelParams(N=16, K1=10.09, K2=10.09, sigma1=0.1)
        spec = run_spec(params, (0, 2, 5), realizations=3, seed=4)
        a, b = boltzmann_echo_curve(spec), boltzmann_echo_curve(spec)
        assert np.array_equal(a.mean, b.mean)
        assert np.array_equal(a.stderr, b.stderr)

    def test_single_realization_has_zero_stderr(self):
        """Test stderr for one realization."""
        params = ModelParams(N=16, K1=10.09, K2=10.09, sigma1=0.1)
        curve = boltzmann_echo_curve(run_spec(params, (0, 3), realizations=1))
        assert np.all(curve.stderr == 0.0)

    def test_budget_is_checked_before_running(self, chaotic_params, mocker):
        """Test the step budget check."""
        runner = mocker.patch('echolab.echo.engine.map_realizations')
        spec = run_spec(chaotic_params, (0, 10), realizations=5)
        with pytest.raises(StepBudgetError) as exc_info:
            boltzmann_echo_curve(spec, step_budget=spec.total_steps - 1)
        assert exc_info.value.exit_code == 3
        assert exc_info.value.details['total_steps'] == 100
        runner.assert_not_called()

    def test_phi2_samples_cycle(self):
        """Test cycling of phi2 samples."""
        params = ModelParams(N=8, K1=1.0, K2=1.0)
        spec = run_spec(params, (0,), realizations=4, sample_count=2)
        _, first = realization_states(spec, 0)
        _, third = realization_states(spec, 2)
        assert np.array_equal(first.amplitudes, third.amplitudes)

    def test_stderr_shrinks_with_realizations(self):
        """Test stderr against realization count."""
        params = ModelParams(N=32, K1=10.09, K2=10.09, sigma1=0.05)
        times = tuple(range(0, 11))
        few = boltzmann_echo_curve(run_spec(params, times, realizations=64, seed=1))
        many = boltzmann_echo_curve(run_spec(params, times, realizations=256, seed=1))
        ratio = few.stderr[5:].mean() / many.stderr[5:].mean()
        assert ratio == pytest.approx(2.0, rel=0.3)


class TestSummarizeSamples:

    def test_mean_and_stderr(self):
        """Test sample summaries."""
        samples = np.array([[1.0, 0.5], [1.0, 0.7], [1.0, 0.9]])
        curve = summarize_samples((0, 1), samples, 8, 'boltzmann', {})
        assert curve.mean[1] == pytest.approx(0.7)
        assert curve.stderr[1] == pytest.approx(0.2 / math.sqrt(3))
        assert curve.realizations == 3


class TestLoschmidtEcho:
    """Test the single-rotator reference echo."""

    def test_unperturbed_is_one(self, random_state):
        """Test the unperturbed Loschmidt echo."""
        steps = build_loschmidt_steps(64, 10.09, 0.0)
        assert abs(loschmidt_echo_single(steps, random_state(64), 30) - 1.0) < 1e-10

    @pytest.mark.parametrize('N, times, sigma1', [
        (32, (0, 1, 4, 9), 0.08),
        pytest.param(256, tuple(range(0, 51, 5)), 0.01, marks=pytest.mark.slow),
    ])
    def test_matches_decoupled_boltzmann_per_realization(self, N, times, sigma1):
        """Test Loschmidt samples against decoupled Boltzmann samples."""
        seed = 21
        params = ModelParams(N=N, K1=10.09, K2=10.09, sigma1=sigma1)
        boltzmann = boltzmann_echo_curve(run_spec(params, times, realizations=3, seed=seed))
        loschmidt = loschmidt_echo_curve(N, 10.09, sigma1, WavepacketSpec(), times,
                                         realizations=3, seed=seed)
        assert loschmidt.kind == 'loschmidt'
        assert np.max(np.abs(boltzmann.samples - loschmidt.samples)) < 1e-10

    def test_curve_reuses_single_echo(self):
        """Test Loschmidt curve samples against single runs."""
        times, seed = (0, 2, 3, 7), 4
        curve = loschmidt_echo_curve(32, 10.09, 0.2, WavepacketSpec(), times, realizations=2, seed=seed)
        steps = build_loschmidt_steps(32, 10.09, 0.2)
        for index, row in enumerate(curve.samples):
            psi = realization_wavepacket(WavepacketSpec(), 32, seed, index, True)
            expected = [loschmidt_echo_single(steps, psi, t) for t in times]
            assert np.allclose(row, expected, atol=1e-13)

    def test_rejects_bad_N(self):
        """Test a bad N."""
        with pytest.raises(ValidationError):
            loschmidt_echo_curve(48, 10.09, 0.1, times=(0, 1))

    def test_budget(self):
        """Test the Loschmidt step budget."""
        with pytest.raises(StepBudgetError):
            loschmidt_echo_curve(32, 10.09, 0.1, times=(0, 5, 10), realizations=2, step_budget=10)
