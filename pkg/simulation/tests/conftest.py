"""
Shared pytest fixtures for the echolab test suite.
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add the simulation directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from echolab import create_context
from echolab.echo.engine import EchoCurve
from echolab.quantum.params import ModelParams
from echolab.quantum.states import Basis, WaveFunction1P


@pytest.fixture(scope='session')
def context():
    """Testing settings with logging configured once per session."""
    return create_context('testing')


@pytest.fixture(autouse=True)
def reset_error_tracker():
    """Error counts start at zero in every test."""
    from logging_config import error_tracker
    error_tracker.reset()
    yield
    error_tracker.reset()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_params():
    """Generic parameters on an oracle-sized torus."""
    return ModelParams(N=8, K1=10.09, K2=7.3, sigma1=0.21, sigma2=0.05,
                       eps_f=0.17, eps_b=0.11, phase_offset=0.33)


@pytest.fixture
def chaotic_params():
    return ModelParams(N=64, K1=10.09, K2=10.09)


@pytest.fixture
def random_state(rng):
    """Factory for normalized random position-basis states."""
    def make(N):
        amplitudes = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        return WaveFunction1P(amplitudes / np.linalg.norm(amplitudes), Basis.POSITION)
    return make


@pytest.fixture
def random_params(rng):
    """Factory for ModelParams with every strength drawn at random."""
    def make(N):
        return ModelParams(
            N=N, K1=rng.uniform(0, 15), K2=rng.uniform(0, 15),
            sigma1=rng.uniform(-0.5, 0.5), sigma2=rng.uniform(-0.5, 0.5),
            eps_f=rng.uniform(0, 0.5), eps_b=rng.uniform(0, 0.5),
            phase_offset=rng.uniform(0, 2 * np.pi),
        )
    return make


@pytest.fixture
def make_curve():
    """Factory for synthetic EchoCurves from a mean function."""
    def make(times, mean, hilbert_dim=2 ** 20, stderr=None):
        times = np.asarray(times)
        mean = np.asarray(mean, dtype=float)
        if stderr is None:
            stderr = np.zeros_like(mean)
        return EchoCurve(times=times, mean=mean, stderr=np.asarray(stderr, dtype=float),
                         realizations=1, hilbert_dim=hilbert_dim, kind='synthetic')
    return make


@pytest.fixture
def write_config(tmp_path):
    """Write config text to a file and return its path."""
    def write(text, name='experiment.cfg'):
        path = Path(tmp_path) / name
        path.write_text(text)
        return path
    return write
