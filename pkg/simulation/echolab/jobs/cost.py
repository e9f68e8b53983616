"""
Cost model for experiment configs: Floquet steps, memory and wall time.
"""
import logging
import math
from dataclasses import dataclass

from echolab.echo.engine import count_steps
from echolab.jobs.schema import ExperimentKind

logger = logging.getLogger(__name__)

COMPLEX_BYTES = 16
# Joint grids alive during one realization: forward state, backward branch, FFT buffer
WORKING_GRIDS = 3
# Reference torus size for the relative step cost
REFERENCE_N = 1024


def relative_step_cost(N):
    """Cost of one joint Floquet step up to a constant: N^2 log2 N."""
    return N * N * math.log2(N)


def curve_count(config):
    """Number of echo curves an experiment computes."""
    kind = config.kind
    if kind is ExperimentKind.SIGMA_SWEEP:
        return len(config.sigma1_values)
    if kind in (ExperimentKind.EPS_SWEEP, ExperimentKind.FIG1_REPRO):
        return len(config.eps_values)
    if kind is ExperimentKind.K2_INDEPENDENCE:
        return len(config.k2_values or ()) + len(config.sigma2_values or ())
    if kind in (ExperimentKind.ECHO_CURVE, ExperimentKind.LOSCHMIDT_CURVE):
        return 1
    return 0


@dataclass
class CostEstimate:
    kind: str
    N: int
    curves: int
    realizations: int
    steps_per_realization: int
    total_steps: int
    memory_per_worker_bytes: int
    peak_memory_bytes: int
    step_cost_vs_reference: float = None
    seconds_per_step: float = None

    @property
    def wall_time_seconds(self):
        if self.seconds_per_step is None:
            return None
        return self.total_steps * self.seconds_per_step

    def to_dict(self):
        return {
            'kind': self.kind,
            'N': self.N,
            'curves': self.curves,
            'realizations': self.realizations,
            'steps_per_realization': self.steps_per_realization,
            'total_steps': self.total_steps,
            'memory_per_worker_bytes': self.memory_per_worker_bytes,
            'peak_memory_bytes': self.peak_memory_bytes,
            'step_cost_vs_reference': self.step_cost_vs_reference,
            'seconds_per_step': self.seconds_per_step,
            'wall_time_seconds': self.wall_time_seconds,
        }

    def lines(self):
        mib = 1024 * 1024
        out = [
            f"experiment: {self.kind}",
            f"N: {self.N}",
            f"curves: {self.curves}",
            f"realizations per curve: {self.realizations}",
            f"steps per realization: {self.steps_per_realization}",
            f"total Floquet steps: {self.total_steps}",
            f"memory per worker: {self.memory_per_worker_bytes / mib:.2f} MiB",
            f"peak memory per worker: {self.peak_memory_bytes / mib:.2f} MiB",
        ]
        if self.step_cost_vs_reference is not None:
            out.append(f"step cost relative to N={REFERENCE_N}: {self.step_cost_vs_reference:.3g}")
        if self.seconds_per_step is not None:
            out.append(f"seconds per step: {self.seconds_per_step:.3g}")
            out.append(f"estimated wall time: {self.wall_time_seconds:.1f} s (one worker)")
        return out


def estimate_cost(config, benchmark=False, fft_workers=1):
    """
    Predicted Floquet steps and memory of an experiment.

    Each realization costs one forward leg to t_max plus one backward leg
    per measurement time. With benchmark=True a short timing run at the
    config's N calibrates the wall-time estimate.
    """
    N = config.N
    curves = curve_count(config)
    per_realization = count_steps(config.times) if curves else 0
    total = curves * config.realizations * per_realization
    grid_bytes = N * N * COMPLEX_BYTES
    if config.kind is ExperimentKind.LOSCHMIDT_CURVE:
        grid_bytes = N * COMPLEX_BYTES

    seconds_per_step = None
    if benchmark and total > 0:
        from echolab.monitoring.metrics import benchmark_step
        seconds_per_step = benchmark_step(N, fft_workers=fft_workers)

    estimate = CostEstimate(
        kind=config.kind.value,
        N=N,
        curves=curves,
        realizations=config.realizations,
        steps_per_realization=per_realization,
        total_steps=total,
        memory_per_worker_bytes=grid_bytes,
        peak_memory_bytes=WORKING_GRIDS * grid_bytes,
        step_cost_vs_reference=relative_step_cost(N) / relative_step_cost(REFERENCE_N) if curves else None,
        seconds_per_step=seconds_per_step,
    )
    logger.debug(f"Cost estimate: {estimate.to_dict()}")
    return estimate
