"""
Power-law regressions of decay rates against perturbation strength.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from echolab.errors import InsufficientDataError, ValidationError

logger = logging.getLogger(__name__)

MIN_STRENGTHS = 3
MIN_SPAN = 4.0
# A point counts as saturated once its rate reaches this fraction of the cap
SATURATION_FRACTION = 0.9


@dataclass
class ScalingFit:
    """rate = coefficient * strength ** exponent"""
    exponent: float
    coefficient: float
    exponent_error: float
    n_points: int
    span: float

    def predict(self, strength):
        return self.coefficient * np.asarray(strength, dtype=float) ** self.exponent

    def to_dict(self):
        return {
            'exponent': self.exponent,
            'coefficient': self.coefficient,
            'exponent_error': self.exponent_error,
            'n_points': self.n_points,
            'span': self.span,
        }


def _as_points(rates):
    points = np.asarray(list(rates), dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValidationError("Rates must be (strength, rate) pairs")
    return points[:, 0], points[:, 1]


def scaling_regression(rates):
    """
    Least squares of ln(rate) against ln(strength).

    Args:
        rates: iterable of (strength, rate) pairs, at least 3 strengths
            spanning a factor of 4

    Raises:
        ValidationError: non-positive strength or rate
        InsufficientDataError: too few strengths or too narrow a span
    """
    strengths, values = _as_points(rates)
    if np.any(strengths <= 0) or np.any(values <= 0):
        raise ValidationError(
            "Scaling regression needs positive strengths and rates",
            details={'strengths': strengths.tolist(), 'rates': values.tolist()}
        )
    unique = np.unique(strengths)
    if unique.size < MIN_STRENGTHS:
        raise InsufficientDataError(f"Need {MIN_STRENGTHS} distinct strengths, got {unique.size}")
    span = float(unique[-1] / unique[0])
    if span < MIN_SPAN:
        raise InsufficientDataError(f"Strengths span a factor {span:.3g}, need {MIN_SPAN:g}")

    result = stats.linregress(np.log(strengths), np.log(values))
    fit = ScalingFit(
        exponent=float(result.slope),
        coefficient=float(math.exp(result.intercept)),
        exponent_error=float(result.stderr),
        n_points=int(strengths.size),
        span=span,
    )
    logger.info(f"Scaling regression: exponent={fit.exponent:.3f} +/- {fit.exponent_error:.3f} "
                f"coefficient={fit.coefficient:.4g}")
    return fit


@dataclass
class CappedRateFit:
    """rate = min(coefficient * strength^2, lyapunov)"""
    coefficient: float
    lyapunov: float
    saturated: tuple
    residual_rms: float

    @property
    def crossover_strength(self):
        """Strength at which the quadratic law reaches the cap."""
        return math.sqrt(self.lyapunov / self.coefficient) if self.coefficient > 0 else math.inf

    def predict(self, strength):
        return np.minimum(self.coefficient * np.asarray(strength, dtype=float) ** 2, self.lyapunov)


def fit_capped_rate(rates, lyapunov):
    """
    Quadratic growth of the rate with strength up to the Lyapunov cap.

    The coefficient is fitted on the points below 90% of the cap; those at
    or above are reported as saturated.
    """
    strengths, values = _as_points(rates)
    if not lyapunov > 0:
        raise ValidationError(f"Lyapunov exponent must be positive, got {lyapunov!r}", field='lyapunov')

    saturated = values >= SATURATION_FRACTION * lyapunov
    free = ~saturated
    if not free.any():
        raise InsufficientDataError("Every rate sits at the Lyapunov cap; no quadratic points to fit")

    s2 = strengths[free] ** 2
    coefficient = float(np.dot(values[free], s2) / np.dot(s2, s2))
    model = np.minimum(coefficient * strengths ** 2, lyapunov)
    residual_rms = float(np.sqrt(np.mean((values - model) ** 2)))
    return CappedRateFit(
        coefficient=coefficient,
        lyapunov=float(lyapunov),
        saturated=tuple(bool(s) for s in saturated),
        residual_rms=residual_rms,
    )
