"""
Boltzmann echo: forward evolution of both rotators, imperfect reversal of
rotator 1 only, then the fidelity of rotator 1's reduced state with psi_1.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from echolab.errors import NormalizationError, StepBudgetError, ValidationError
from echolab.jobs.queue import map_realizations
from echolab.monitoring.metrics import record_metric
from echolab.preparation.ensembles import Rho2Spec, sample_rho2
from echolab.preparation.wavepacket import WavepacketSpec, realization_wavepacket
from echolab.quantum.floquet import build_backward_step, build_forward_step, evolve
from echolab.quantum.params import ModelParams
from echolab.quantum.states import JointState

logger = logging.getLogger(__name__)

DEFAULT_NORM_TOLERANCE = 1e-8

# Default measurement grid: every period up to here, every DEFAULT_COARSE_STRIDE after
DEFAULT_DENSE_UNTIL = 30
DEFAULT_COARSE_STRIDE = 5


def default_times(t_max):
    """0, 1, ..., 30, then every 5 periods up to t_max."""
    if t_max < 0:
        raise ValidationError(f"t_max must be non-negative, got {t_max}", field='t_max')
    dense = list(range(0, min(t_max, DEFAULT_DENSE_UNTIL) + 1))
    coarse = list(range(DEFAULT_DENSE_UNTIL + DEFAULT_COARSE_STRIDE, t_max + 1, DEFAULT_COARSE_STRIDE))
    return tuple(dense + coarse)


def count_steps(times):
    """Floquet steps for one realization: one forward leg to t_max plus a backward leg per time."""
    times = list(times)
    if not times:
        return 0
    return int(max(times) + sum(times))


def validate_times(times):
    times = tuple(int(t) for t in times)
    if not times:
        raise ValidationError("Measurement times must be non-empty", field='times')
    if times[0] < 0:
        raise ValidationError("Measurement times must be non-negative", field='times')
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValidationError("Measurement times must be strictly increasing", field='times')
    return times


@dataclass(frozen=True)
class EchoRunSpec:
    params: ModelParams
    psi1: WavepacketSpec
    rho2: Rho2Spec
    times: tuple
    realizations: int
    seed: int
    randomize_center: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'times', validate_times(self.times))
        if not isinstance(self.realizations, int) or self.realizations < 1:
            raise ValidationError(
                f"realizations must be a positive integer, got {self.realizations!r}",
                field='realizations'
            )
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValidationError(f"seed must be a non-negative integer, got {self.seed!r}", field='seed')

    @property
    def steps_per_realization(self):
        return count_steps(self.times)

    @property
    def total_steps(self):
        return self.realizations * self.steps_per_realization


@dataclass
class EchoCurve:
    """Ensemble mean and standard error of an echo at each measurement time."""
    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    realizations: int
    hilbert_dim: int
    kind: str = 'boltzmann'
    params: dict = field(default_factory=dict)
    samples: np.ndarray = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=int)
        self.mean = np.asarray(self.mean, dtype=float)
        self.stderr = np.asarray(self.stderr, dtype=float)
        if not (self.times.shape == self.mean.shape == self.stderr.shape):
            raise ValidationError("times, mean and stderr must have equal lengths")

    def __len__(self):
        return self.times.shape[0]

    @property
    def saturation_level(self):
        return 1.0 / self.hilbert_dim


def summarize_samples(times, samples, hilbert_dim, kind, params):
    """Reduce a (realizations x times) matrix in fixed row order."""
    samples = np.asarray(samples, dtype=float)
    realizations = samples.shape[0]
    mean = samples.mean(axis=0)
    if realizations > 1:
        stderr = samples.std(axis=0, ddof=1) / math.sqrt(realizations)
    else:
        stderr = np.zeros(samples.shape[1])
    return EchoCurve(
        times=np.asarray(times), mean=mean, stderr=stderr,
        realizations=realizations, hilbert_dim=hilbert_dim,
        kind=kind, params=params, samples=samples,
    )


def check_budget(total_steps, step_budget, details=None):
    if step_budget is not None and total_steps > step_budget:
        raise StepBudgetError(total_steps, step_budget, details)


def _check_normalized(psi, name, tolerance):
    norm = psi.norm()
    if abs(norm - 1.0) > tolerance:
        raise NormalizationError(
            f"{name} is not normalized (norm={norm!r})", norm=norm, tolerance=tolerance
        )


@lru_cache(maxsize=8)
def floquet_steps(params):
    """Forward and backward steps for a parameter set, cached per process."""
    return build_forward_step(params), build_backward_step(params)


def _fidelity(value):
    return min(max(value, 0.0), 1.0)


def boltzmann_echo_single(params, psi1, phi2, t, tolerance=DEFAULT_NORM_TOLERANCE, fft_workers=1):
    """
    M_B(t) for the pure-state realization psi1 (x) phi2.

    Runs t forward periods, t backward periods and returns
    <psi1| Tr_2 |Psi><Psi| |psi1>.
    """
    _check_normalized(psi1, 'psi1', tolerance)
    _check_normalized(phi2, 'phi2', tolerance)
    if t < 0:
        raise ValidationError(f"Echo time must be non-negative, got {t}", field='t')
    if t == 0:
        return 1.0

    forward, backward = floquet_steps(params)
    state = JointState.product(psi1, phi2)
    state = evolve(forward, state, t, fft_workers=fft_workers)
    state = evolve(backward, state, t, fft_workers=fft_workers)
    return _fidelity(state.project_onto(psi1))


def realization_states(spec, index):
    """(psi1, phi2) drawn for realization `index` of a run."""
    N = spec.params.N
    psi1 = realization_wavepacket(spec.psi1, N, spec.seed, index, spec.randomize_center)
    phi2 = sample_rho2(spec.rho2, N, index % spec.rho2.sample_count)
    return psi1, phi2


def _run_realization(item):
    """
    Echo values of one realization at every measurement time.

    The forward state is advanced once through all times; each time
    branches a backward leg from the current forward state.
    """
    spec, index, fft_workers = item
    psi1, phi2 = realization_states(spec, index)
    forward_step, backward_step = floquet_steps(spec.params)

    values = np.empty(len(spec.times))
    forward = JointState.product(psi1, phi2)
    elapsed = 0
    for i, t in enumerate(spec.times):
        forward = evolve(forward_step, forward, t - elapsed, fft_workers=fft_workers)
        elapsed = t
        if t == 0:
            values[i] = 1.0
            continue
        echoed = evolve(backward_step, forward, t, fft_workers=fft_workers)
        values[i] = _fidelity(echoed.project_onto(psi1))
    return values


def boltzmann_echo_curve(spec, workers=1, step_budget=None, fft_workers=1):
    """
    Ensemble-averaged Boltzmann echo over `spec.realizations` draws.

    Raises:
        StepBudgetError: the run needs more Floquet steps than `step_budget`
    """
    check_budget(spec.total_steps, step_budget, {
        'realizations': spec.realizations,
        'steps_per_realization': spec.steps_per_realization,
        'N': spec.params.N,
    })

    logger.info(
        f"Boltzmann echo: N={spec.params.N} sigma1={spec.params.sigma1} eps_f={spec.params.eps_f} "
        f"times={len(spec.times)} realizations={spec.realizations} steps={spec.total_steps}"
    )
    start = time.perf_counter()
    items = [(spec, index, fft_workers) for index in range(spec.realizations)]
    samples = np.vstack(map_realizations(_run_realization, items, workers))
    duration = time.perf_counter() - start
    record_metric('boltzmann_curve.seconds', duration, N=spec.params.N, steps=spec.total_steps)

    return summarize_samples(spec.times, samples, spec.params.N, 'boltzmann', spec.params.to_dict())
