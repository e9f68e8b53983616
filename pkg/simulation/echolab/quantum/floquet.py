"""
Floquet operators of the kicked rotators and split-step propagation.

One forward period applies the joint position-diagonal kick and then the
momentum-diagonal free evolution. One backward period applies the free
evolution first and the kick second, with every particle-1 phase
complex-conjugated, so that backward(K1) undoes forward(K1) exactly.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import fft as sfft

from echolab.errors import ContractViolationError
from echolab.quantum.states import Basis, JointState, momentum_grid, position_grid

logger = logging.getLogger(__name__)


class Direction(str, Enum):
    FORWARD = 'forward'
    BACKWARD = 'backward'


def _frozen(array):
    array = np.ascontiguousarray(array, dtype=np.complex128)
    array.setflags(write=False)
    return array


def kick_phase_1p(N, strength, hbar_eff):
    """exp(-i K cos(x_m) / hbar) on the position grid."""
    return np.exp(-1j * strength * np.cos(position_grid(N)) / hbar_eff)


def free_phase_1p(N, period, hbar_eff):
    """exp(-i p_n^2 T / (2 hbar)) on the momentum grid."""
    p = momentum_grid(N)
    return np.exp(-1j * p ** 2 * period / (2.0 * hbar_eff))


def coupling_phase(N, eps, phase_offset, hbar_eff):
    """exp(-i eps sin(x1 - x2 - offset) / hbar) on the joint position grid."""
    x = position_grid(N)
    delta = np.subtract.outer(x, x) - phase_offset
    return np.exp(-1j * eps * np.sin(delta) / hbar_eff)


@dataclass(frozen=True, eq=False)
class FloquetStep:
    """Precomputed diagonal phase tables for one kick period."""
    direction: Direction
    kick_phase: np.ndarray
    free_phase_1: np.ndarray
    free_phase_2: np.ndarray
    free_phase_grid: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'direction', Direction(self.direction))
        object.__setattr__(self, 'kick_phase', _frozen(self.kick_phase))
        object.__setattr__(self, 'free_phase_1', _frozen(self.free_phase_1))
        object.__setattr__(self, 'free_phase_2', _frozen(self.free_phase_2))
        object.__setattr__(
            self, 'free_phase_grid',
            _frozen(np.multiply.outer(self.free_phase_1, self.free_phase_2))
        )

    @property
    def N(self):
        return self.free_phase_1.shape[0]


def build_forward_step(params):
    """Forward period of H_f = H1 + H2 + U_f."""
    N, hbar = params.N, params.hbar_eff
    kick = np.multiply.outer(
        kick_phase_1p(N, params.K1, hbar),
        kick_phase_1p(N, params.K2, hbar),
    )
    if params.eps_f != 0.0:
        kick = kick * coupling_phase(N, params.eps_f, params.phase_offset, hbar)

    free = free_phase_1p(N, params.T, hbar)
    logger.debug(f"Built forward step N={N} K1={params.K1} K2={params.K2} eps_f={params.eps_f}")
    return FloquetStep(Direction.FORWARD, kick, free, free.copy())


def build_backward_step(params):
    """
    Backward period of H_b = -(H1 + Sigma1) + (H2 + Sigma2) + U_b.

    Particle 1 is reversed at strength K1 + sigma1, particle 2 keeps running
    forward at K2 + sigma2, and the coupling is not reversed.
    """
    N, hbar = params.N, params.hbar_eff
    kick = np.multiply.outer(
        np.conj(kick_phase_1p(N, params.K1 + params.sigma1, hbar)),
        kick_phase_1p(N, params.K2 + params.sigma2, hbar),
    )
    if params.eps_b != 0.0:
        kick = kick * coupling_phase(N, params.eps_b, params.phase_offset, hbar)

    free = free_phase_1p(N, params.T, hbar)
    logger.debug(f"Built backward step N={N} sigma1={params.sigma1} sigma2={params.sigma2} eps_b={params.eps_b}")
    return FloquetStep(Direction.BACKWARD, kick, np.conj(free), free.copy())


def apply_step(step, state, fft_workers=1):
    """
    Apply one period of `step` to a position-basis JointState.

    Returns a new JointState in the position basis.
    """
    if state.basis != (Basis.POSITION, Basis.POSITION):
        raise ContractViolationError(
            "apply_step expects a position-basis state on both axes",
            {'basis': [b.value for b in state.basis]}
        )
    if state.amplitudes.shape != step.kick_phase.shape:
        raise ContractViolationError(
            "State and step dimensions differ",
            {'state_shape': list(state.amplitudes.shape), 'step_N': step.N}
        )

    if step.direction is Direction.FORWARD:
        psi = state.amplitudes * step.kick_phase
        psi = sfft.fft2(psi, norm='ortho', workers=fft_workers, overwrite_x=True)
        psi *= step.free_phase_grid
        psi = sfft.ifft2(psi, norm='ortho', workers=fft_workers, overwrite_x=True)
    else:
        psi = sfft.fft2(state.amplitudes, norm='ortho', workers=fft_workers)
        psi *= step.free_phase_grid
        psi = sfft.ifft2(psi, norm='ortho', workers=fft_workers, overwrite_x=True)
        psi *= step.kick_phase

    return JointState(psi)


def evolve(step, state, periods, fft_workers=1):
    """Apply `step` repeatedly."""
    for _ in range(periods):
        state = apply_step(step, state, fft_workers=fft_workers)
    return state


@dataclass(frozen=True, eq=False)
class SingleParticleSteps:
    """Forward (K) and backward (K + sigma, reversed) tables for one rotator."""
    forward_kick: np.ndarray
    forward_free: np.ndarray
    backward_kick: np.ndarray
    backward_free: np.ndarray


def build_loschmidt_steps(N, K, sigma, T=1.0):
    hbar = 2.0 * np.pi / N
    free = free_phase_1p(N, T, hbar)
    return SingleParticleSteps(
        forward_kick=_frozen(kick_phase_1p(N, K, hbar)),
        forward_free=_frozen(free),
        backward_kick=_frozen(np.conj(kick_phase_1p(N, K + sigma, hbar))),
        backward_free=_frozen(np.conj(free)),
    )


def apply_single_forward(steps, psi):
    """One forward period on length-N position amplitudes."""
    out = sfft.fft(psi * steps.forward_kick, norm='ortho')
    out *= steps.forward_free
    return sfft.ifft(out, norm='ortho', overwrite_x=True)


def apply_single_backward(steps, psi):
    out = sfft.fft(psi, norm='ortho')
    out *= steps.backward_free
    out = sfft.ifft(out, norm='ortho', overwrite_x=True)
    out *= steps.backward_kick
    return out
