"""
Physical parameters of two coupled kicked rotators quantized on the torus.
"""
import math
from dataclasses import dataclass, field, replace, asdict

from echolab.errors import ValidationError

# Phase shift inside the coupling potential eps * sin(x1 - x2 - offset)
DEFAULT_PHASE_OFFSET = 0.33


def is_power_of_two(n):
    return isinstance(n, int) and not isinstance(n, bool) and n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ModelParams:
    """
    Parameters of the forward and backward two-particle Hamiltonians.

    eps_b defaults to eps_f (a single coupling U = U_f = U_b).
    """
    N: int
    K1: float
    K2: float
    sigma1: float = 0.0
    sigma2: float = 0.0
    eps_f: float = 0.0
    eps_b: float = None
    phase_offset: float = DEFAULT_PHASE_OFFSET
    T: float = 1.0
    hbar_eff: float = field(init=False)

    def __post_init__(self):
        if self.eps_b is None:
            object.__setattr__(self, 'eps_b', self.eps_f)

        if not is_power_of_two(self.N):
            raise ValidationError(
                f"N must be a power of two >= 2, got {self.N!r}", field='N'
            )

        for name in ('K1', 'K2', 'sigma1', 'sigma2', 'eps_f', 'eps_b', 'phase_offset', 'T'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite real, got {value!r}", field=name)
            object.__setattr__(self, name, float(value))

        if self.eps_f < 0 or self.eps_b < 0:
            raise ValidationError(
                "Coupling strengths must be non-negative",
                details={'eps_f': self.eps_f, 'eps_b': self.eps_b}
            )
        if self.T <= 0:
            raise ValidationError(f"Kick period must be positive, got {self.T}", field='T')

        object.__setattr__(self, 'hbar_eff', 2.0 * math.pi / self.N)

    def with_updates(self, **changes):
        """Copy with some fields changed; eps_b follows eps_f unless given."""
        if 'eps_f' in changes and 'eps_b' not in changes and self.eps_b == self.eps_f:
            changes['eps_b'] = changes['eps_f']
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class RegimeScales:
    """Level spacings and bandwidths bounding the golden-rule window."""
    delta1: float
    delta2: float
    bandwidth1: float
    bandwidth2: float


def regime_scales(N):
    """One- and two-particle level spacings and bandwidths for torus size N."""
    return RegimeScales(
        delta1=2.0 * math.pi / N,
        delta2=4.0 * math.pi / N ** 2,
        bandwidth1=2.0 * math.pi,
        bandwidth2=4.0 * math.pi,
    )
