"""
Integration tests for the command-line surface.
"""
import pytest

import config as settings_module
from echolab.cli import main
from echolab.jobs.output import read_curve_csv
from echolab.jobs.schema import load_config

pytestmark = pytest.mark.integration


UNPERTURBED = """\
experiment = echo_curve
N = 64
K1 = 10.09
K2 = 10.09
sigma1 = 0
eps_f = 0
times = 0..10
realizations = 3
seed = 1
"""

PERTURBED = """\
experiment = echo_curve
N = 16
sigma1 = 0.1
eps_f = 0.05
times = 0..12
realizations = 6
seed = 8
"""


def run(args):
    return main(['--env', 'testing', *[str(a) for a in args]])


class TestRunCommand:
    """Test `run` end to end on small configs."""

    def test_unperturbed_curve_stays_at_one(self, write_config, tmp_path):
        """Test an unperturbed echo_curve run end to end."""
        out = tmp_path / 'out'
        assert run(['run', write_config(UNPERTURBED), '--output', out]) == 0
        times, mean, stderr, realizations = read_curve_csv(out / 'curve.csv')
        assert times == list(range(11))
        assert all(abs(m - 1.0) < 1e-10 for m in mean)
        assert realizations == [3] * 11
        assert (out / 'samples.csv').exists()
        assert (out / 'fit.txt').exists()

    def test_meta_reproduces_config(self, write_config, tmp_path):
        """Test that meta.txt holds the resolved config."""
        path = write_config(PERTURBED)
        out = tmp_path / 'out'
        assert run(['run', path, '--output', out]) == 0
        meta = load_config(out / 'meta.txt')
        assert meta.values == load_config(path).values
        text = (out / 'meta.txt').read_text()
        assert '# total_steps = ' in text
        assert '# hbar_eff = ' in text

    def test_rerun_from_meta_is_identical(self, write_config, tmp_path):
        """Test rerunning from meta.txt."""
        first, second = tmp_path / 'first', tmp_path / 'second'
        assert run(['run', write_config(PERTURBED), '--output', first]) == 0
        assert run(['run', first / 'meta.txt', '--output', second]) == 0
        assert (first / 'curve.csv').read_bytes() == (second / 'curve.csv').read_bytes()

    def test_worker_count_does_not_change_results(self, write_config, tmp_path):
        """Test result independence of the worker count."""
        path = write_config(PERTURBED)
        results = []
        for workers in (1, 4):
            out = tmp_path / f"w{workers}"
            assert run(['run', path, '--output', out, '--workers', workers]) == 0
            results.append((out / 'curve.csv').read_bytes())
        assert results[0] == results[1]

    def test_output_from_config(self, write_config, tmp_path):
        """Test the output directory taken from the config."""
        out = tmp_path / 'from_config'
        assert run(['run', write_config(PERTURBED + f"output = {out}\n")]) == 0
        assert (out / 'curve.csv').exists()


class TestExitCodes:
    """Test error reporting through exit codes."""

    def test_unknown_key_exits_2_with_line(self, write_config, capsys):
        """Test exit code 2 and line number for an unknown key."""
        path = write_config("experiment = echo_curve\nN = 16\nwarp_factor = 9\n")
        assert run(['run', path]) == 2
        assert 'line 3' in capsys.readouterr().err

    def test_invalid_N_exits_2(self, write_config, capsys):
        """Test exit code 2 for a bad N."""
        path = write_config("experiment = echo_curve\nN = 48\n")
        assert run(['run', path]) == 2
        assert 'line 2' in capsys.readouterr().err

    def test_zero_realizations_cannot_run(self, write_config, tmp_path):
        """Test that zero realizations are rejected by run."""
        path = write_config("experiment = echo_curve\nN = 16\nrealizations = 0\ntimes = 0..2\n")
        assert run(['run', path, '--output', tmp_path / 'out']) == 2

    def test_budget_exceeded_exits_3(self, write_config, tmp_path, capsys, monkeypatch):
        """Test exit code 3 when the step budget is exceeded."""
        monkeypatch.setattr(settings_module.TestingConfig, 'STEP_BUDGET', 10)
        out = tmp_path / 'out'
        assert run(['run', write_config(PERTURBED), '--output', out]) == 3
        err = capsys.readouterr().err
        assert 'total_steps: ' in err
        assert not (out / 'curve.csv').exists()

    def test_missing_config_exits_2(self, tmp_path):
        """Test exit code 2 for a missing config file."""
        assert run(['run', tmp_path / 'nope.cfg']) == 2


class TestEstimateCommand:
    """Test `estimate` output."""

    def test_estimate_without_benchmark(self, write_config, capsys):
        """Test the estimate command without timing."""
        assert run(['estimate', write_config(PERTURBED), '--no-benchmark']) == 0
        out = capsys.readouterr().out
        assert 'steps per realization: 90' in out
        assert 'total Floquet steps: 540' in out

    def test_estimate_with_benchmark(self, write_config, capsys, mocker):
        """Test the estimate command with timing."""
        mocker.patch('echolab.monitoring.metrics.benchmark_step', return_value=0.001)
        assert run(['estimate', write_config(PERTURBED)]) == 0
        assert 'estimated wall time: 0.5 s' in capsys.readouterr().out

    def test_estimate_flags_budget(self, write_config, capsys, monkeypatch):
        """Test that estimate reports a blown budget."""
        monkeypatch.setattr(settings_module.TestingConfig, 'STEP_BUDGET', 10)
        assert run(['estimate', write_config(PERTURBED), '--no-benchmark']) == 0
        assert 'exceeds step budget 10' in capsys.readouterr().out

    def test_full_flag_scales_fig1(self, write_config, capsys):
        """Test the full-size fig1 switch."""
        path = write_config("experiment = fig1_repro\ntimes = 0..10\nrealizations = 1\n")
        assert run(['estimate', path, '--full', '--no-benchmark']) == 0
        assert 'N: 1024' in capsys.readouterr().out
