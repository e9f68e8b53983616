"""
Long-time plateau of an echo curve.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from echolab.errors import InsufficientDataError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_TAIL_FRACTION = 0.25
# Allowed drop across the tail, as a fraction of the plateau
TAIL_DRIFT_TOLERANCE = 0.2
# Onset: first time the mean comes within this factor of the plateau
ONSET_FACTOR = 2.0


@dataclass
class SaturationEstimate:
    plateau: float
    t_onset: int
    expected: float
    tail_points: int
    tail_drop: float
    decaying: bool

    @property
    def ratio(self):
        """plateau / expected"""
        return self.plateau / self.expected

    def matches_expected(self, rel_tol=0.3):
        return not self.decaying and abs(self.ratio - 1.0) <= rel_tol

    def to_dict(self):
        return {
            'plateau': self.plateau,
            't_onset': self.t_onset,
            'expected': self.expected,
            'tail_points': self.tail_points,
            'tail_drop': self.tail_drop,
            'decaying': self.decaying,
        }


def detect_saturation(curve, tail_fraction=DEFAULT_TAIL_FRACTION):
    """
    Mean of the last `tail_fraction` of the curve, compared with 1/N.

    A tail that still falls by more than 20% of the plateau (beyond three
    standard errors) is flagged as decaying rather than accepted.
    """
    if not 0.0 < tail_fraction <= 1.0:
        raise ValidationError(f"tail_fraction must lie in (0, 1], got {tail_fraction}", field='tail_fraction')

    n_tail = max(2, math.ceil(tail_fraction * len(curve)))
    if len(curve) < n_tail:
        raise InsufficientDataError(
            f"Curve has {len(curve)} points, saturation needs at least {n_tail}",
            window=(int(curve.times[0]), int(curve.times[-1])) if len(curve) else None,
        )

    t_tail = curve.times[-n_tail:].astype(float)
    m_tail = curve.mean[-n_tail:]
    plateau = float(m_tail.mean())
    if plateau <= 0:
        raise InsufficientDataError(
            f"Non-positive plateau {plateau!r}", window=(int(t_tail[0]), int(t_tail[-1]))
        )

    slope = np.polyfit(t_tail, m_tail, 1)[0]
    tail_drop = float(-slope * (t_tail[-1] - t_tail[0]))
    noise = 3.0 * float(curve.stderr[-n_tail:].max(initial=0.0))
    decaying = tail_drop > TAIL_DRIFT_TOLERANCE * plateau + noise

    onset = np.nonzero(curve.mean <= ONSET_FACTOR * plateau)[0]
    t_onset = int(curve.times[onset[0]]) if onset.size else int(t_tail[0])

    estimate = SaturationEstimate(
        plateau=plateau,
        t_onset=t_onset,
        expected=1.0 / curve.hilbert_dim,
        tail_points=n_tail,
        tail_drop=tail_drop,
        decaying=bool(decaying),
    )
    if decaying:
        logger.warning(
            f"Echo tail still decaying: drop {tail_drop:.3g} over t={t_tail[0]:.0f}..{t_tail[-1]:.0f}",
            extra={'error_code': 'TAIL_DECAYING'}
        )
    return estimate
