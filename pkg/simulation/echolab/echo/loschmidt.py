"""
One-particle Loschmidt echo, |<psi|U_{K+sigma}^-t U_K^t|psi>|^2.

Independent of the joint-grid engine: it only touches length-N states,
so the decoupled Boltzmann echo can be checked against it realization by
realization.
"""
import logging
import time

import numpy as np

from echolab.echo.engine import check_budget, count_steps, summarize_samples, validate_times
from echolab.errors import ValidationError
from echolab.jobs.queue import map_realizations
from echolab.monitoring.metrics import record_metric
from echolab.preparation.wavepacket import WavepacketSpec, realization_wavepacket
from echolab.quantum.floquet import apply_single_backward, apply_single_forward, build_loschmidt_steps
from echolab.quantum.params import is_power_of_two

logger = logging.getLogger(__name__)


def _advance(steps, amplitudes, periods):
    for _ in range(periods):
        amplitudes = apply_single_forward(steps, amplitudes)
    return amplitudes


def _echo_from(steps, psi, forward, t):
    """Run t backward periods from `forward` and return the overlap with psi."""
    echoed = forward
    for _ in range(t):
        echoed = apply_single_backward(steps, echoed)
    return min(float(np.abs(np.vdot(psi.amplitudes, echoed)) ** 2), 1.0)


def loschmidt_echo_single(steps, psi, t):
    """M_L(t) for one normalized position-basis state."""
    if t == 0:
        return 1.0
    return _echo_from(steps, psi, _advance(steps, psi.amplitudes, t), t)


def _run_loschmidt_realization(item):
    N, K1, sigma1, T, psi1, times, seed, index, randomize_center = item
    steps = build_loschmidt_steps(N, K1, sigma1, T)
    psi = realization_wavepacket(psi1, N, seed, index, randomize_center)

    values = np.empty(len(times))
    forward = psi.amplitudes
    elapsed = 0
    for i, t in enumerate(times):
        forward = _advance(steps, forward, t - elapsed)
        elapsed = t
        values[i] = 1.0 if t == 0 else _echo_from(steps, psi, forward, t)
    return values


def loschmidt_echo_curve(N, K1, sigma1, psi1=None, times=(0,), realizations=1, seed=0,
                         randomize_center=True, workers=1, T=1.0, step_budget=None):
    """
    Ensemble-averaged Loschmidt echo of rotator 1 alone.

    Realization r uses the same psi1 draw as realization r of a Boltzmann
    run with the same seed.
    """
    if not is_power_of_two(N):
        raise ValidationError(f"N must be a power of two >= 2, got {N!r}", field='N')
    if not isinstance(realizations, int) or realizations < 1:
        raise ValidationError(
            f"realizations must be a positive integer, got {realizations!r}", field='realizations'
        )
    psi1 = psi1 or WavepacketSpec()
    times = validate_times(times)
    check_budget(realizations * count_steps(times), step_budget, {'N': N, 'realizations': realizations})

    start = time.perf_counter()
    items = [
        (N, float(K1), float(sigma1), float(T), psi1, times, seed, index, randomize_center)
        for index in range(realizations)
    ]
    samples = np.vstack(map_realizations(_run_loschmidt_realization, items, workers))
    record_metric('loschmidt_curve.seconds', time.perf_counter() - start, N=N)

    logger.info(f"Loschmidt echo: N={N} K1={K1} sigma1={sigma1} realizations={realizations}")
    params = {'N': N, 'K1': float(K1), 'sigma1': float(sigma1), 'T': float(T), 'hbar_eff': 2.0 * np.pi / N}
    return summarize_samples(times, samples, N, 'loschmidt', params)
