"""
Gaussian wavepackets on the torus.
"""
import math
from dataclasses import dataclass

import numpy as np

from echolab.errors import ValidationError
from echolab.quantum.states import Basis, WaveFunction1P, position_grid

TWO_PI = 2.0 * math.pi

# Periodic images summed when building a wavepacket
WINDINGS = (-1, 0, 1)


@dataclass(frozen=True)
class WavepacketSpec:
    """
    Center (r0, p0) on the torus and position width sigma_x.

    sigma_x=None means the minimal-uncertainty width sqrt(hbar_eff).
    """
    r0: float = math.pi
    p0: float = math.pi
    sigma_x: float = None

    def __post_init__(self):
        for name in ('r0', 'p0'):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite real, got {value!r}", field=name)
            object.__setattr__(self, name, float(value) % TWO_PI)
        if self.sigma_x is not None and not (math.isfinite(self.sigma_x) and self.sigma_x > 0):
            raise ValidationError(
                f"Wavepacket width must be positive, got {self.sigma_x!r}", field='sigma_x'
            )

    def width(self, N):
        return self.sigma_x if self.sigma_x is not None else math.sqrt(TWO_PI / N)

    def recentered(self, r0, p0):
        return WavepacketSpec(r0=r0, p0=p0, sigma_x=self.sigma_x)


def make_wavepacket(spec, N):
    """
    Periodized Gaussian exp[i p0 d / hbar - d^2 / (2 sigma^2)], d = x + 2 pi w - r0.

    The momentum center p0 is a torus momentum, so the packet peaks at
    momentum index p0 * N / (2 pi).
    """
    if N < 2:
        raise ValidationError(f"Hilbert dimension must be >= 2, got {N}", field='N')

    sigma = spec.width(N)
    hbar = TWO_PI / N
    x = position_grid(N)

    amplitudes = np.zeros(N, dtype=np.complex128)
    for winding in WINDINGS:
        d = x + TWO_PI * winding - spec.r0
        amplitudes += np.exp(1j * spec.p0 * d / hbar - d ** 2 / (2.0 * sigma ** 2))

    return WaveFunction1P(amplitudes / np.linalg.norm(amplitudes), Basis.POSITION)


def position_expectation(psi):
    """Circular mean position of |psi|^2 in [0, 2 pi)."""
    psi = psi.to_position()
    weights = psi.probabilities()
    angle = np.angle(np.sum(weights * np.exp(1j * position_grid(psi.N))))
    return float(angle % TWO_PI)


def position_variance(psi):
    """Variance of |psi|^2 about its circular mean, distances wrapped to (-pi, pi]."""
    psi = psi.to_position()
    weights = psi.probabilities()
    center = position_expectation(psi)
    d = (position_grid(psi.N) - center + math.pi) % TWO_PI - math.pi
    return float(np.sum(weights * d ** 2) / np.sum(weights))


def realization_wavepacket(spec, N, seed, index, randomize_center=True):
    """
    psi_1 for one ensemble realization.

    With randomize_center the center (r0, p0) is drawn uniformly on the torus
    from the (seed, index) stream; the width is kept.
    """
    if not randomize_center:
        return make_wavepacket(spec, N)
    rng = np.random.default_rng([seed, index])
    r0, p0 = rng.uniform(0.0, TWO_PI, size=2)
    return make_wavepacket(spec.recentered(float(r0), float(p0)), N)
