"""
Sampled pure states standing in for the uncontrolled system's density matrix.

Mixtures are realized as pure-state samples; averaging the echo over the
samples reproduces the mixed-state echo because the echo is linear in rho_2.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from echolab.errors import ValidationError
from echolab.preparation.wavepacket import WavepacketSpec, make_wavepacket
from echolab.quantum.states import Basis, WaveFunction1P

logger = logging.getLogger(__name__)

# Sub-streams of a spec seed: per-sample draws and the shared mixture weights
SAMPLE_STREAM = 0
MIXTURE_STREAM = 1

MAX_SEED = 2 ** 64 - 1


class Rho2Kind(str, Enum):
    WAVEPACKET = 'wavepacket'
    RANDOM_PURE = 'random_pure'
    RANDOM_MIXTURE = 'random_mixture'
    THERMAL = 'thermal'


@dataclass(frozen=True)
class Rho2Spec:
    kind: Rho2Kind = Rho2Kind.RANDOM_PURE
    wavepacket: WavepacketSpec = None
    weights: tuple = None
    beta: float = None
    sample_count: int = 1
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', Rho2Kind(self.kind))
        except ValueError:
            raise ValidationError(
                f"Unknown rho2 kind {self.kind!r}",
                field='kind',
                details={'supported_kinds': [k.value for k in Rho2Kind]}
            )

        if not isinstance(self.sample_count, int) or self.sample_count < 1:
            raise ValidationError(
                f"sample_count must be a positive integer, got {self.sample_count!r}",
                field='sample_count'
            )
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MAX_SEED:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}", field='seed')

        if self.kind is Rho2Kind.WAVEPACKET and self.wavepacket is None:
            object.__setattr__(self, 'wavepacket', WavepacketSpec())

        if self.kind is Rho2Kind.THERMAL:
            if self.beta is None or math.isnan(self.beta) or self.beta < 0:
                raise ValidationError(
                    f"Thermal states need an inverse temperature beta >= 0, got {self.beta!r}",
                    field='beta'
                )

        if self.weights is not None:
            weights = tuple(float(w) for w in self.weights)
            if any(w < 0 or not math.isfinite(w) for w in weights) or sum(weights) <= 0:
                raise ValidationError(
                    "Mixture weights must be non-negative with a positive sum", field='weights'
                )
            object.__setattr__(self, 'weights', weights)


def _mixture_probabilities(spec, N):
    if spec.weights is not None:
        if len(spec.weights) > N:
            raise ValidationError(
                f"{len(spec.weights)} mixture weights given for N={N}", field='weights'
            )
        weights = np.zeros(N)
        weights[:len(spec.weights)] = spec.weights
    else:
        # |a_alpha|^2 from one normalized complex Gaussian vector per spec seed
        rng = np.random.default_rng([spec.seed, MIXTURE_STREAM])
        amplitudes = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        weights = np.abs(amplitudes) ** 2
    return weights / weights.sum()


def _thermal_probabilities(beta, N):
    signed = np.where(np.arange(N) < N // 2, np.arange(N), np.arange(N) - N)
    energies = (2.0 * np.pi * signed / N) ** 2 / 2.0
    if math.isinf(beta):
        probabilities = (energies == energies.min()).astype(float)
    else:
        probabilities = np.exp(-beta * (energies - energies.min()))
    return probabilities / probabilities.sum()


def sample_rho2(spec, N, index):
    """
    Draw the `index`-th pure-state sample of rho_2.

    Deterministic in (spec.seed, index).
    """
    if not 0 <= index < spec.sample_count:
        raise ValidationError(
            f"Sample index {index} outside [0, {spec.sample_count})", field='index'
        )

    if spec.kind is Rho2Kind.WAVEPACKET:
        return make_wavepacket(spec.wavepacket, N)

    rng = np.random.default_rng([spec.seed, SAMPLE_STREAM, index])

    if spec.kind is Rho2Kind.RANDOM_PURE:
        amplitudes = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        return WaveFunction1P(amplitudes / np.linalg.norm(amplitudes), Basis.POSITION)

    if spec.kind is Rho2Kind.RANDOM_MIXTURE:
        alpha = int(rng.choice(N, p=_mixture_probabilities(spec, N)))
        amplitudes = np.zeros(N, dtype=np.complex128)
        amplitudes[alpha] = 1.0
        return WaveFunction1P(amplitudes, Basis.POSITION)

    # Thermal: free-rotor momentum eigenstates weighted by exp(-beta p^2 / 2)
    n = int(rng.choice(N, p=_thermal_probabilities(spec.beta, N)))
    amplitudes = np.zeros(N, dtype=np.complex128)
    amplitudes[n] = 1.0
    return WaveFunction1P(amplitudes, Basis.MOMENTUM).to_position()
