"""
Integration tests for the experiment jobs on small tori.
"""
import pytest

from echolab.jobs.experiments import RunOptions, run_experiment
from echolab.jobs.schema import parse_config_text
from echolab.monitoring.metrics import MetricsCollector

pytestmark = pytest.mark.integration


def run_text(text, output_dir):
    return run_experiment(parse_config_text(text), output_dir, RunOptions())


class TestCurveJobs:
    """Test jobs that compute echo curves."""

    def test_echo_curve_layout(self, tmp_path):
        """Test the echo_curve output layout."""
        result = run_text("experiment = echo_curve\nN = 32\nsigma1 = 0.2\neps_f = 0.1\n"
                          "times = 0..15\nrealizations = 4\n", tmp_path)
        assert result['status'] == 'completed'
        for name in ('curve.csv', 'samples.csv', 'fit.txt', 'meta.txt'):
            assert (tmp_path / name).exists()
        report = (tmp_path / 'fit.txt').read_text()
        assert '[saturation]' in report

    def test_loschmidt_curve(self, tmp_path):
        """Test the loschmidt_curve job."""
        result = run_text("experiment = loschmidt_curve\nN = 64\nsigma1 = 0.1\n"
                          "times = 0..20\nrealizations = 4\n", tmp_path)
        assert result['curves'] == 1
        assert result['final_mean'] < 1.0

    def test_sigma_sweep_members(self, tmp_path):
        """Test sigma sweep member directories and reports."""
        result = run_text("experiment = sigma_sweep\nN = 32\nsigma1_values = 0.1, 0.2, 0.4\n"
                          "times = 0..12\nrealizations = 3\nn_traj = 200\n", tmp_path)
        assert result['curves'] == 3
        for label in ('sigma1_0.1', 'sigma1_0.2', 'sigma1_0.4'):
            assert (tmp_path / label / 'curve.csv').exists()
        assert (tmp_path / 'sweep.csv').read_text().startswith('strength,rate,rate_error')
        report = (tmp_path / 'fit.txt').read_text()
        assert '[scaling]' in report and '[classical]' in report

    def test_eps_sweep_members(self, tmp_path):
        """Test coupling sweep member directories."""
        result = run_text("experiment = eps_sweep\nN = 16\neps_values = 0.2, 0.4\n"
                          "times = 0..6\nrealizations = 2\nn_traj = 200\n", tmp_path)
        assert result['curves'] == 2
        assert (tmp_path / 'eps_0.4' / 'fit.txt').exists()

    def test_k2_independence_groups(self, tmp_path):
        """Test partner sweep groups."""
        result = run_text("experiment = k2_independence\nN = 16\nsigma1 = 0.3\n"
                          "k2_values = 7.2, 10.09\nsigma2_values = 0, 0.1\n"
                          "times = 0..8\nrealizations = 2\n", tmp_path)
        assert result['curves'] == 4
        assert (tmp_path / 'sweep_K2.csv').exists()
        assert (tmp_path / 'sweep_sigma2.csv').exists()
        assert (tmp_path / 'K2_7.2' / 'curve.csv').exists()

    def test_fig1_ordering(self, tmp_path):
        """Test curve ordering in the fig1 job."""
        result = run_text("experiment = fig1_repro\nN = 32\nsigma1 = 0.05\n"
                          "eps_values = 0, 0.05, 0.15\ntimes = 0..20\nrealizations = 4\nn_traj = 200\n",
                          tmp_path)
        assert result['curves'] == 3
        assert result['ordered']


class TestClassicalJobs:
    """Test jobs without quantum evolution."""

    def test_lyapunov_job(self, tmp_path):
        """Test the lyapunov job."""
        result = run_text("experiment = lyapunov\nK1 = 10.09\nn_traj = 100\nt_steps = 500\n", tmp_path)
        assert result['exponent'] == pytest.approx(1.62, rel=0.1)
        assert 'ln_K_over_2' in (tmp_path / 'fit.txt').read_text()

    def test_gamma_estimate_job(self, tmp_path):
        """Test the gamma_estimate job."""
        result = run_text("experiment = gamma_estimate\nN = 1024\nsigma1 = 0.0018\neps_f = 0.0037\n"
                          "n_traj = 1000\nmax_lag = 6\n", tmp_path)
        lines = (tmp_path / 'correlator.csv').read_text().splitlines()
        assert lines[0] == 'lag,sigma,coupling'
        assert len(lines) == 8
        assert 0.2 < result['predicted_rate'] < 0.6
        assert 'regime: golden_rule' in (tmp_path / 'fit.txt').read_text()


class TestRunBookkeeping:
    """Test the meta.txt bookkeeping around every job."""

    def test_meta_reports_collected_peak_memory(self, tmp_path, mocker):
        """Test peak memory from the metrics summary in meta.txt."""
        summary = mocker.spy(MetricsCollector, 'summary')
        run_text("experiment = echo_curve\nN = 8\ntimes = 0..3\nrealizations = 1\n", tmp_path)
        assert summary.call_count == 1
        meta = (tmp_path / 'meta.txt').read_text()
        line = next(l for l in meta.splitlines() if l.startswith('# peak_memory_mb = '))
        assert float(line.split('=')[1]) == pytest.approx(summary.spy_return['peak_memory_mb'])
        assert '# step_cost_vs_reference = ' in meta
