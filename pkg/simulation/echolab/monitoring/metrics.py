"""
Run metrics: wall time, throughput and memory of simulation jobs.
"""
import logging
import time

import numpy as np
import psutil

logger = logging.getLogger(__name__)
perf_logger = logging.getLogger('echolab.performance')


def record_metric(name, value, **tags):
    """Log a performance metric"""
    perf_logger.info(f"METRIC {name}: {value}", extra={
        'metric_name': name,
        'metric_value': value,
        'tags': tags
    })


def process_memory_mb():
    """Resident memory of this process in MiB."""
    return psutil.Process().memory_info().rss / 1024 / 1024


class MetricsCollector:
    """Collects timing and resource metrics for echo runs."""

    def __init__(self):
        self.records = []

    def collect_job_metrics(self, job_type, status, duration, total_steps=None, error_code=None):
        """
        Collect metrics for a finished job.

        Args:
            job_type (str): experiment kind or curve kind
            status (str): 'completed' or 'failed'
            duration (float): wall time in seconds
            total_steps (int): Floquet steps performed
            error_code (str): error code if the job failed
        """
        record = {
            'job_type': job_type,
            'status': status,
            'duration_seconds': duration,
            'total_steps': total_steps,
            'memory_usage_mb': process_memory_mb(),
            'error_code': error_code,
        }
        if total_steps and duration > 0:
            record['steps_per_second'] = total_steps / duration
        self.records.append(record)

        record_metric(f"{job_type}.duration", duration, status=status, total_steps=total_steps)
        logger.info(f"Collected metrics for {job_type}: {status} in {duration:.3f}s")
        return record

    def summary(self):
        """Totals over every job collected so far."""
        durations = [r['duration_seconds'] for r in self.records]
        return {
            'jobs': len(self.records),
            'failed': sum(1 for r in self.records if r['status'] == 'failed'),
            'total_duration': float(sum(durations)),
            'peak_memory_mb': max((r['memory_usage_mb'] for r in self.records), default=0.0),
        }


def benchmark_step(N, repeats=3, fft_workers=1):
    """
    Seconds per joint Floquet step at torus size N.

    Times `repeats` forward steps on a random normalized state after one
    warm-up step.
    """
    from echolab.quantum.floquet import apply_step, build_forward_step
    from echolab.quantum.params import ModelParams
    from echolab.quantum.states import JointState

    step = build_forward_step(ModelParams(N=N, K1=10.09, K2=10.09, eps_f=0.001))
    rng = np.random.default_rng(0)
    grid = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    state = JointState(grid / np.linalg.norm(grid))

    state = apply_step(step, state, fft_workers=fft_workers)
    start = time.perf_counter()
    for _ in range(repeats):
        state = apply_step(step, state, fft_workers=fft_workers)
    elapsed = (time.perf_counter() - start) / repeats

    record_metric('step.seconds', elapsed, N=N, fft_workers=fft_workers)
    return elapsed
